#pragma once

#include <optional>
#include <utility>

#include "hcv/strip_grid.hpp"
#include "hcv/vortex_sources.hpp"

// Damped Newton / preconditioned CG solver for the regularized equation
//
//   Delta v = (2/Xi^2)(e^{u0} e^v - 1) + g   on (0, rmax) x S^1_beta
//
// with v = 0 at r = 0, a mirror (zero-slope) closure at r = rmax, and
// periodicity in t.  Unknowns live on rows i = 1..Nr; the mirror row is
// half-weighted so the linearized operator stays symmetric, which is what
// lets plain CG solve the Newton systems.

namespace hcv {

struct SolverConfig {
    double tol = 1e-10;       // max-norm of the (row-scaled) nonlinear residual
    int max_newton = 60;
    int max_halvings = 40;    // step halvings per Newton iteration
    double cg_rtol = 1e-12;   // CG stop: ||r||_2 <= cg_rtol * ||rhs||_2
    long max_cg_iters = 400000;
    bool project_bracket = false;  // clamp each accepted iterate into the bracket
    int threads = 1;
    void validate() const;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;        // residual evaluations (>= 1 even for an exact guess)
    double final_residual = 0.0;
    long cg_iterations = 0;    // summed over Newton steps
    long bracket_violations = 0;  // nodes outside [lower-1e-8, upper+1e-8] at exit
    double wall_seconds = 0.0;    // in-memory diagnostic only, never serialized
};

// nodewise bounds; +-inf entries mean "unconstrained at this node"
struct Bracket {
    ScalarField lower;
    ScalarField upper;
};

// Nonlinear residual F(v) = Delta_h v - (2/Xi^2)(e^{u0} e^v - 1) - g on rows
// 1..Nr-1, with the mirror-ghost closure (unscaled) on row Nr; row 0 is 0.
// e^{u0+v} is assembled as eval_expu0 * e^v so vortex nodes contribute their
// exact zero instead of exp(-inf) noise.
ScalarField residual(const ScalarField& v, const SourceData& src, const StripGrid& grid);

// initial guess v0 must live on `grid`; pass bracket to validate/monitor the
// sub/supersolution pinch (lower from the radial ladder, upper = -u0)
std::pair<ScalarField, SolveReport> solve(const ScalarField& v0, const SourceData& src,
                                          const StripGrid& grid, const SolverConfig& cfg,
                                          const Bracket* bracket = nullptr);

// same iteration on explicitly supplied nodal coefficient fields (rows 1..Nr
// are read; row 0 ignored).  This is the entry point for manufactured-forcing
// studies, where g is replaced by a discrete field rather than the closed form.
std::pair<ScalarField, SolveReport> solve_fields(const ScalarField& v0, const ScalarField& E0,
                                                 const ScalarField& gsrc,
                                                 const PhysicalParams& p, const StripGrid& grid,
                                                 const SolverConfig& cfg);

// lift a radial profile onto the grid: linear interpolation in r, constant in
// t; nodes left of the profile's first node get -inf (the truncated radial
// problem says nothing there), nodes right of the last get the last value
ScalarField lift_profile(const std::vector<double>& pr, const std::vector<double>& pw,
                         const StripGrid& grid);

// upper barrier -u0 (+inf at vortex nodes, where u0 = -inf)
ScalarField upper_barrier(const SourceData& src, const StripGrid& grid);

}  // namespace hcv
