#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcv/diagnostics.hpp"
#include "hcv/elliptic_solver.hpp"
#include "hcv/observables.hpp"
#include "hcv/radial_profile.hpp"

// One run end to end: resolve the configuration, build the analytic sources,
// climb the radial ladder for the lower barrier, solve the 2-D problem inside
// the bracket, evaluate observables and decay diagnostics, serialize.

namespace hcv {

struct RunConfig {
    PhysicalParams params{};
    std::optional<int> charge;                        // shorthand: N evenly placed points
    std::vector<std::pair<double, double>> vortices;  // explicit (r_j, t_j)
    CutoffSpec cutoff;                                // radial entries 0 = derive from points
    int Nr = 1024;
    int Nt = 256;
    double rmax = 0.0;                                // 0 = 2 r_hi + 3 S
    SolverConfig solver;
    std::string out_dir;                              // empty = nothing written
    bool dump_fields = true;                          // v, u, phi2, F_tr CSVs
    int ladder_rungs = 4;                             // nested truncations for the barrier
    int ladder_t_samples = 1024;                      // majorant sampling density
    double near_axis_eps = 0.2;                       // slack of the decay fits
    double winding_rad = 0.3;                         // loop half-width at each vortex
};

// defaults materialized and validated; auto placement puts N simple points
// evenly on the circle r = max(1, S/2), t = beta k / N
struct ResolvedSetup {
    VortexConfig vortex;
    CutoffSpec cutoff;
    double rmax = 0.0;
    StripGrid grid;
};

ResolvedSetup resolve(const RunConfig& cfg);

struct RunResult {
    ResolvedSetup setup;
    SolveReport solve_report;

    double flux_value = 0.0;       // Phi
    double charge_estimate = 0.0;  // Phi / 2 pi
    double action_density = 0.0;
    double action_flux = 0.0;
    SdResiduals residuals;
    std::vector<int> winding;

    std::optional<NearAxisReport> near_axis;  // empty: fit window under 5 rows, skipped
    FarFieldReport far_field;
    FluxIdentityReport flux_identity;
    double grad_l2 = 0.0;
    long bracket_violations = 0;  // nodes outside [w - 1e-6, -u0 + 1e-6]

    std::optional<LadderResult> ladder;  // engaged for N > 0

    ScalarField v, u, phi2;
    GaugeFields gauge;

    int exit_code = 0;    // 0 ok, 4 when a decay check or the bracket fails
    std::string failure;  // short reason when exit_code != 0
};

// Runs the full pipeline; throws the module errors (ValidationError family,
// SolverError family, DiagnosticError family) rather than encoding them in
// exit_code: callers map exception class to exit status 2/3/4.
RunResult run(const RunConfig& cfg);

// flat key/value document: flux, charge, action_density, action_flux,
// residual_sd1, residual_sd2, energy_identity, windings[], plus "diagnostics"
// and the fully resolved "config" echo.  Deterministic for identical runs;
// wall time is deliberately not serialized.
std::string report_json(const RunConfig& cfg, const RunResult& res);

// `N=<n> flux/2pi=<x> action/2pi^2=<y> sd_residual=<z>`
std::string summary_line(const RunResult& res);

// report.json always; v.csv, u.csv, phi2.csv, F_tr.csv when dump_fields
void write_artifacts(const RunConfig& cfg, const RunResult& res);

}  // namespace hcv
