#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hcv/elliptic_solver.hpp"
#include "hcv/strip_grid.hpp"
#include "hcv/vortex_sources.hpp"

// Post-solve verification of the decay estimates the construction relies on,
// the averaged flux identity, and manufactured-forcing convergence studies.
// All operations are read-only on the solution.

namespace hcv {

struct NearAxisReport {
    double slope_v;    // log-log slope of max_t|v| on the window
    double slope_vt;   // same for max_t|v_t|
    double c_upper;    // fitted constant of the upper v_r envelope  C r^{2-eps}
    double c_lower;    // fitted constant of the lower envelope     -C r^{1-eps}
    double eps;
    double window_lo, window_hi;
    int nodes;
    bool vacuous;  // v identically 0 on the window (vacuum run)
    bool pass;     // slopes >= 2 - eps (constants are existential, not asserted)
};

// fit window r in [2 hr, r_lo/2]; fewer than 5 rows there is an error
NearAxisReport near_axis_decay(const ScalarField& v, const SourceData& src, double eps);

struct FarFieldReport {
    double rate;                // lambda from log|vbar - v_plateau| ~ -lambda r + c
    double v_plateau;           // t-average of v on the outermost row
    double plateau_variation;   // max-min of vbar over the last S of radius
    double edge_grad_max;       // max |grad v| over the outer 5% of rows
    double window_lo, window_hi;
    int nodes;
    bool vacuous;
    bool pass;  // rate >= 0.8*(4/S) and edge_grad_max < 1e-4
};

// fit window r in [r_hi + S, rmax - S]; a plateau that still varies by more
// than 1e-3 over the last S means the truncation radius is too small
FarFieldReport far_field_decay(const ScalarField& v, const SourceData& src);

struct FluxIdentityReport {
    double lap_integral;     // integral of the discrete Laplacian of v
    double smooth_integral;  // integral of (2/Xi^2)(1 - e^u)  (= 2 Phi)
    double g_quadrature;     // panel-Gauss integral of g
    double four_pi_n;        // 4 pi N reference
    double identity_gap;     // |smooth_integral - g_quadrature|
};

FluxIdentityReport averaged_flux_identity(const ScalarField& v, const SourceData& src);

// finite-norm spot check: ||grad v||_{L2} over r >= delta
double gradient_l2(const ScalarField& v, double delta);

struct MmsStudy {
    PhysicalParams params;
    std::optional<SourceData> background;      // engaged: vortex-background variant
    double rmax = 0.0;
    std::vector<std::pair<int, int>> meshes;   // (Nr, Nt), >= 3 entries
    double amplitude = 1.0;
    double mask_radius = 0.2;                  // error measured off-mask when background set
    SolverConfig solver;
};

struct MmsReport {
    std::vector<double> errors;  // max-norm of v - v* per mesh
    std::vector<double> orders;  // log2(e_i / e_{i+1})
    double order;                // mean observed order
    bool pass;                   // order in [1.7, 2.3]
};

// manufactured field v* = A sin^2(pi r/rmax) (1 + 0.3 cos(2 pi t/beta)),
// compatible with both boundary rows; forcing g~ = Delta v* - q(E0 e^{v*} - 1)
MmsReport mms_convergence(const MmsStudy& study);

double manufactured_v(const PhysicalParams& p, double rmax, double amplitude, double r, double t);
double manufactured_lap(const PhysicalParams& p, double rmax, double amplitude, double r,
                        double t);

struct HardyReport {
    int trials = 0;
    int violations = 0;      // profiles with margin > tol
    double worst_margin = 0; // max of lhs - 4 rhs over the batch
    double tol = 0;
};

// half-line Hardy bound, integral f^2/r^2 <= 4 integral f'^2, exercised on
// pseudo-random C^1 piecewise-cubic bumps supported away from the origin.
// Both integrals are trapezoid sums on a fine uniform grid with the exact
// piecewise derivative; `tol` absorbs that quadrature noise additively.
HardyReport hardy_check(int trials, unsigned seed, double tol = 1e-6);

}  // namespace hcv
