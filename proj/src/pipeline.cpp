#include "hcv/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hcv/errors.hpp"
#include "hcv/geometry.hpp"

namespace hcv {

namespace {

constexpr double kPi = 3.14159265358979323846;

using json = nlohmann::ordered_json;

json json_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;  // NaN/inf have no JSON literal
}

}  // namespace

ResolvedSetup resolve(const RunConfig& cfg) {
    cfg.params.validate();
    if (cfg.Nr < 4 || cfg.Nt < 4)
        throw ValidationError("resolve: grid must have at least 4 nodes per direction");
    if (cfg.charge && !cfg.vortices.empty())
        throw ValidationError("resolve: give a charge or an explicit vortex list, not both");
    if (!cfg.charge && cfg.vortices.empty())
        throw ValidationError("resolve: no charge and no vortex list given");

    ResolvedSetup s;
    if (cfg.charge) {
        if (*cfg.charge < 0) throw ValidationError("resolve: charge must be >= 0");
        const double rc = std::max(1.0, cfg.params.S / 2.0);
        for (int k = 0; k < *cfg.charge; ++k)
            s.vortex.points.emplace_back(rc, cfg.params.beta * k / *cfg.charge);
    } else {
        s.vortex.points = cfg.vortices;
    }
    s.vortex.validate(cfg.params);

    const bool bands_given =
        cfg.cutoff.r_lo != 0.0 || cfg.cutoff.r1 != 0.0 || cfg.cutoff.r2 != 0.0 ||
        cfg.cutoff.r_hi != 0.0;
    s.cutoff = bands_given ? cfg.cutoff : CutoffSpec::defaults_for(s.vortex, cfg.params);
    s.cutoff.bt1 = cfg.cutoff.bt1;
    s.cutoff.bt2 = cfg.cutoff.bt2;
    s.cutoff.validate();
    for (const auto& [rj, tj] : s.vortex.points)
        if (rj <= s.cutoff.r1 || rj >= s.cutoff.r2)
            throw ValidationError("resolve: vortex radius outside the cutoff plateau (r1, r2)");

    s.rmax = cfg.rmax > 0.0 ? cfg.rmax : 2.0 * s.cutoff.r_hi + 3.0 * cfg.params.S;
    if (s.rmax <= s.cutoff.r_hi)
        throw ValidationError("resolve: rmax must exceed the cutoff support radius r_hi");
    s.grid = StripGrid(cfg.Nr, cfg.Nt, s.rmax, cfg.params.beta);
    return s;
}

RunResult run(const RunConfig& cfg) {
    RunResult res;
    res.setup = resolve(cfg);
    const PhysicalParams& p = cfg.params;
    const StripGrid& grid = res.setup.grid;
    SourceData src(p, res.setup.vortex, res.setup.cutoff);

    // lower barrier from the radial ladder; the zero source majorizes itself
    // in vacuum, so the ladder degenerates to the zero profile and is skipped
    Bracket br{ScalarField(grid), upper_barrier(src, grid)};
    if (res.setup.vortex.N() > 0) {
        const double h = res.setup.cutoff.r_lo / 64.0;
        std::vector<std::pair<double, double>> schedule;
        for (int n = 1; n <= cfg.ladder_rungs; ++n)
            schedule.emplace_back(res.setup.cutoff.r_lo / std::pow(2.0, n),
                                  res.setup.cutoff.r_hi * std::pow(2.0, n));
        res.ladder = monotone_ladder(p, src, schedule, h, cfg.ladder_t_samples);
        br.lower = lift_profile(res.ladder->limit.r, res.ladder->limit.w, grid);
    }

    SolverConfig scfg = cfg.solver;
    auto [v, rep] = solve(ScalarField(grid), src, grid, scfg, &br);
    res.v = std::move(v);
    res.solve_report = rep;

    for (int i = 0; i <= grid.Nr; ++i)
        for (int k = 0; k < grid.Nt; ++k) {
            const double lo = br.lower.at(i, k) - 1e-6, hi = br.upper.at(i, k) + 1e-6;
            if (res.v.at(i, k) < lo || res.v.at(i, k) > hi) ++res.bracket_violations;
        }

    auto [u, phi2] = reconstruct_u(res.v, src);
    res.u = std::move(u);
    res.phi2 = std::move(phi2);
    res.gauge = gauge_potentials(res.u, src);
    auto [Phi, Phi2pi] = flux(res.gauge.F_tr);
    res.flux_value = Phi;
    res.charge_estimate = Phi2pi;
    auto [Sd, Sf] = action(res.v, src);
    res.action_density = Sd;
    res.action_flux = Sf;
    res.residuals = selfduality_residual(res.u, res.gauge, src);
    res.winding = windings(res.gauge, res.setup.vortex, cfg.winding_rad);

    // near-axis fit only when the window carries enough rows at this mesh
    int win_rows = 0;
    for (int i = 0; i <= grid.Nr; ++i) {
        const double r = grid.r(i);
        if (r >= 2.0 * grid.hr && r <= res.setup.cutoff.r_lo / 2.0) ++win_rows;
    }
    if (win_rows >= 5) res.near_axis = near_axis_decay(res.v, src, cfg.near_axis_eps);
    res.far_field = far_field_decay(res.v, src);
    res.flux_identity = averaged_flux_identity(res.v, src);
    res.grad_l2 = gradient_l2(res.v, grid.hr);

    if (res.near_axis && !res.near_axis->pass) {
        res.exit_code = 4;
        res.failure = "near-axis decay fit below the required rate";
    } else if (!res.far_field.pass) {
        res.exit_code = 4;
        res.failure = "far-field decay check failed";
    } else if (res.bracket_violations > 0) {
        res.exit_code = 4;
        res.failure = "solution escapes the sub/supersolution bracket";
    }

    if (!cfg.out_dir.empty()) write_artifacts(cfg, res);
    return res;
}

std::string report_json(const RunConfig& cfg, const RunResult& res) {
    json j;
    j["flux"] = res.flux_value;
    j["charge"] = res.charge_estimate;
    j["action_density"] = res.action_density;
    j["action_flux"] = res.action_flux;
    j["residual_sd1"] = res.residuals.r1;
    j["residual_sd2"] = res.residuals.r2;
    j["energy_identity"] = res.residuals.energy_identity;
    j["windings"] = res.winding;

    json d;
    d["solver"] = {{"converged", res.solve_report.converged},
                   {"iterations", res.solve_report.iterations},
                   {"final_residual", res.solve_report.final_residual},
                   {"cg_iterations", res.solve_report.cg_iterations},
                   {"bracket_violations", res.bracket_violations}};
    if (res.near_axis) {
        const NearAxisReport& na = *res.near_axis;
        d["near_axis"] = {{"slope_v", json_or_null(na.slope_v)},
                          {"slope_vt", json_or_null(na.slope_vt)},
                          {"c_upper", json_or_null(na.c_upper)},
                          {"c_lower", json_or_null(na.c_lower)},
                          {"eps", na.eps},
                          {"window", {na.window_lo, na.window_hi}},
                          {"nodes", na.nodes},
                          {"vacuous", na.vacuous},
                          {"pass", na.pass}};
    } else {
        d["near_axis"] = {{"skipped", true},
                          {"reason", "fit window holds fewer than 5 rows at this mesh"}};
    }
    d["far_field"] = {{"rate", json_or_null(res.far_field.rate)},
                      {"v_plateau", res.far_field.v_plateau},
                      {"plateau_variation", res.far_field.plateau_variation},
                      {"edge_grad_max", res.far_field.edge_grad_max},
                      {"window", {res.far_field.window_lo, res.far_field.window_hi}},
                      {"nodes", res.far_field.nodes},
                      {"vacuous", res.far_field.vacuous},
                      {"pass", res.far_field.pass}};
    d["flux_identity"] = {{"lap_integral", res.flux_identity.lap_integral},
                          {"smooth_integral", res.flux_identity.smooth_integral},
                          {"g_quadrature", res.flux_identity.g_quadrature},
                          {"four_pi_n", res.flux_identity.four_pi_n},
                          {"identity_gap", res.flux_identity.identity_gap}};
    d["grad_l2"] = res.grad_l2;
    d["residual_sd2_definitional"] = res.residuals.r2_definitional;
    d["residual_mask_radius"] = res.residuals.mask_radius;
    if (res.ladder) {
        d["ladder"] = {{"I", res.ladder->I},
                       {"order_margin", res.ladder->order_margin},
                       {"sup_change", res.ladder->sup_change},
                       {"w_infinity", res.ladder->w_infinity}};
    }
    j["diagnostics"] = d;

    json c;
    c["S"] = cfg.params.S;
    c["beta"] = cfg.params.beta;
    json pts = json::array();
    for (const auto& [rj, tj] : res.setup.vortex.points) pts.push_back({rj, tj});
    c["vortices"] = pts;
    c["cutoff"] = {{"r_lo", res.setup.cutoff.r_lo}, {"r1", res.setup.cutoff.r1},
                   {"r2", res.setup.cutoff.r2},     {"r_hi", res.setup.cutoff.r_hi},
                   {"bt1", res.setup.cutoff.bt1},   {"bt2", res.setup.cutoff.bt2}};
    c["nr"] = cfg.Nr;
    c["nt"] = cfg.Nt;
    c["rmax"] = res.setup.rmax;
    c["tol"] = cfg.solver.tol;
    c["threads"] = cfg.solver.threads;
    c["dump"] = cfg.dump_fields ? "fields" : "none";
    c["out"] = cfg.out_dir;
    j["config"] = c;

    return j.dump(2) + "\n";
}

std::string summary_line(const RunResult& res) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "N=%d flux/2pi=%.6f action/2pi^2=%.6f sd_residual=%.3e",
                  res.setup.vortex.N(), res.charge_estimate,
                  res.action_density / (2.0 * kPi * kPi), res.residuals.r1);
    return buf;
}

void write_artifacts(const RunConfig& cfg, const RunResult& res) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    {
        std::ofstream f(out / "report.json", std::ios::binary);
        if (!f) throw ValidationError("write_artifacts: cannot open report.json for writing");
        f << report_json(cfg, res);
    }
    if (cfg.dump_fields) {
        dump_csv(res.v, (out / "v.csv").string());
        dump_csv(res.u, (out / "u.csv").string());
        dump_csv(res.phi2, (out / "phi2.csv").string());
        dump_csv(res.gauge.F_tr, (out / "F_tr.csv").string());
    }
}

}  // namespace hcv
