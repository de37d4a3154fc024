#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hcv/errors.hpp"

// Uniform finite-difference mesh on [0, r_max] x S^1_beta.  Radial nodes
// r_i = i*hr (i = 0..Nr) include the axis i=0, where Dirichlet data lives and
// the PDE is never evaluated.  Temporal nodes t_k = k*ht (k = 0..Nt-1) wrap
// modulo Nt.

namespace hcv {

struct StripGrid {
    int Nr = 0;
    int Nt = 0;
    double rmax = 0.0;
    double beta = 0.0;
    double hr = 0.0;
    double ht = 0.0;

    StripGrid() = default;
    StripGrid(int Nr_, int Nt_, double rmax_, double beta_);

    double r(int i) const { return i * hr; }
    double t(int k) const { return k * ht; }
    int wrap_k(int k) const { return ((k % Nt) + Nt) % Nt; }
    std::size_t nodes() const { return std::size_t(Nr + 1) * std::size_t(Nt); }
    std::size_t idx(int i, int k) const { return std::size_t(i) * Nt + std::size_t(wrap_k(k)); }

    bool operator==(const StripGrid& o) const {
        return Nr == o.Nr && Nt == o.Nt && rmax == o.rmax && beta == o.beta;
    }
};

struct ScalarField {
    StripGrid grid;
    std::vector<double> a;  // row-major, (Nr+1) x Nt

    ScalarField() = default;
    explicit ScalarField(const StripGrid& g) : grid(g), a(g.nodes(), 0.0) {}

    double& at(int i, int k) { return a[grid.idx(i, k)]; }
    double at(int i, int k) const { return a[grid.idx(i, k)]; }

    // all entries finite (the u field with its -inf vortex convention is the
    // single documented exception and bypasses this check)
    void require_finite(const char* what) const;
};

// 5-point Laplacian, interior rows 1..Nr-1; rows 0 and Nr are left zero.
ScalarField laplacian(const ScalarField& f);

// central differences; one-sided second-order rows at i=0 and i=Nr, periodic in t
ScalarField gradient_r(const ScalarField& f);
ScalarField gradient_t(const ScalarField& f);

// trapezoid in r x rectangle in t, deterministic pairwise summation
double integrate(const ScalarField& f);

// deterministic pairwise sum of a buffer (reference reduction for every norm
// and quadrature in the library; result is independent of thread count)
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

// CSV dump: header "r,t,value", row-major by radius then time, 17 significant digits
void dump_csv(const ScalarField& f, const std::string& path);

// two-column CSV without grid (radial profiles): header "r,w"
void dump_profile_csv(const std::vector<double>& r, const std::vector<double>& w,
                      const std::string& path);

}  // namespace hcv
