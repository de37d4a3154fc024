#include "hcv/strip_grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hcv {

StripGrid::StripGrid(int Nr_, int Nt_, double rmax_, double beta_)
    : Nr(Nr_), Nt(Nt_), rmax(rmax_), beta(beta_) {
    if (Nr < 2) throw ValidationError("StripGrid: Nr must be >= 2, got " + std::to_string(Nr));
    if (Nt < 8) throw ValidationError("StripGrid: Nt must be >= 8, got " + std::to_string(Nt));
    if (!(rmax > 0.0) || !std::isfinite(rmax))
        throw ValidationError("StripGrid: rmax must be positive, got " + std::to_string(rmax));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ValidationError("StripGrid: beta must be positive, got " + std::to_string(beta));
    hr = rmax / Nr;
    ht = beta / Nt;
}

void ScalarField::require_finite(const char* what) const {
    for (double v : a)
        if (!std::isfinite(v))
            throw ValidationError(std::string(what) + ": field contains a non-finite entry");
}

ScalarField laplacian(const ScalarField& f) {
    const StripGrid& g = f.grid;
    ScalarField out(g);
    const double cr = 1.0 / (g.hr * g.hr), ct = 1.0 / (g.ht * g.ht);
    for (int i = 1; i < g.Nr; ++i) {
        const std::size_t row = g.idx(i, 0);
        for (int k = 0; k < g.Nt; ++k) {
            const int kp = (k + 1 == g.Nt) ? 0 : k + 1;
            const int km = (k == 0) ? g.Nt - 1 : k - 1;
            out.a[row + k] =
                (f.a[row + g.Nt + k] - 2.0 * f.a[row + k] + f.a[row - g.Nt + k]) * cr +
                (f.a[row + kp] - 2.0 * f.a[row + k] + f.a[row + km]) * ct;
        }
    }
    return out;
}

ScalarField gradient_r(const ScalarField& f) {
    const StripGrid& g = f.grid;
    ScalarField out(g);
    const double c = 1.0 / (2.0 * g.hr);
    const std::size_t nt = std::size_t(g.Nt);
    for (int k = 0; k < g.Nt; ++k) {
        out.a[k] = (-3.0 * f.a[k] + 4.0 * f.a[nt + k] - f.a[2 * nt + k]) * c;
        const std::size_t last = std::size_t(g.Nr) * nt;
        out.a[last + k] = (3.0 * f.a[last + k] - 4.0 * f.a[last - nt + k] + f.a[last - 2 * nt + k]) * c;
    }
    for (int i = 1; i < g.Nr; ++i) {
        const std::size_t row = std::size_t(i) * nt;
        for (int k = 0; k < g.Nt; ++k)
            out.a[row + k] = (f.a[row + nt + k] - f.a[row - nt + k]) * c;
    }
    return out;
}

ScalarField gradient_t(const ScalarField& f) {
    const StripGrid& g = f.grid;
    ScalarField out(g);
    const double c = 1.0 / (2.0 * g.ht);
    for (int i = 0; i <= g.Nr; ++i) {
        const std::size_t row = std::size_t(i) * g.Nt;
        for (int k = 0; k < g.Nt; ++k) {
            const int kp = (k + 1 == g.Nt) ? 0 : k + 1;
            const int km = (k == 0) ? g.Nt - 1 : k - 1;
            out.a[row + k] = (f.a[row + kp] - f.a[row + km]) * c;
        }
    }
    return out;
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

double integrate(const ScalarField& f) {
    const StripGrid& g = f.grid;
    std::vector<double> buf(f.a);
    const std::size_t nt = std::size_t(g.Nt);
    for (std::size_t k = 0; k < nt; ++k) {
        buf[k] *= 0.5;
        buf[std::size_t(g.Nr) * nt + k] *= 0.5;
    }
    return pairwise_sum(buf) * g.hr * g.ht;
}

namespace {
void write_g17(std::ofstream& os, double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    os << tmp;
}
}  // namespace

void dump_csv(const ScalarField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!os) throw ValidationError("dump_csv: cannot open " + path);
    os << "r,t,value\n";
    const StripGrid& g = f.grid;
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            write_g17(os, g.r(i));
            os << ',';
            write_g17(os, g.t(k));
            os << ',';
            write_g17(os, f.at(i, k));
            os << '\n';
        }
}

void dump_profile_csv(const std::vector<double>& r, const std::vector<double>& w,
                      const std::string& path) {
    if (r.size() != w.size()) throw InternalError("dump_profile_csv: length mismatch");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("dump_profile_csv: cannot open " + path);
    os << "r,w\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        write_g17(os, r[i]);
        os << ',';
        write_g17(os, w[i]);
        os << '\n';
    }
}

}  // namespace hcv
