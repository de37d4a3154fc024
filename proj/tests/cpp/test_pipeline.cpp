#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcv/errors.hpp"
#include "hcv/pipeline.hpp"

using namespace hcv;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("resolve: charge shorthand places points evenly on r = max(1, S/2)") {
    RunConfig cfg;
    cfg.params = {2.0, 2.0};
    cfg.charge = 3;
    cfg.Nr = 64;
    cfg.Nt = 16;
    ResolvedSetup s = resolve(cfg);
    REQUIRE(s.vortex.points.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(s.vortex.points[std::size_t(j)].first == 1.0);
        CHECK(s.vortex.points[std::size_t(j)].second ==
              doctest::Approx(2.0 * j / 3.0).epsilon(1e-15));
    }
    CHECK(s.cutoff.r_lo == doctest::Approx(0.25));
    CHECK(s.cutoff.r1 == doctest::Approx(0.5));
    CHECK(s.cutoff.r2 == doctest::Approx(2.0));
    CHECK(s.cutoff.r_hi == doctest::Approx(4.0));
    CHECK(s.rmax == doctest::Approx(2.0 * 4.0 + 3.0 * 2.0));
    CHECK(s.grid.Nr == 64);
    CHECK(s.grid.Nt == 16);

    RunConfig wide;
    wide.params = {3.0, 2.5};            // S = 3: placement radius max(1, 1.5)
    wide.charge = 1;
    ResolvedSetup s2 = resolve(wide);
    CHECK(s2.vortex.points[0].first == 1.5);
}

TEST_CASE("resolve: validation rejects conflicting or malformed configurations") {
    RunConfig both;
    both.charge = 1;
    both.vortices = {{1.0, 0.5}};
    CHECK_THROWS_AS(resolve(both), ValidationError);

    RunConfig neg;
    neg.charge = -2;
    CHECK_THROWS_AS(resolve(neg), ValidationError);

    RunConfig tiny;
    tiny.charge = 1;
    tiny.Nr = 2;
    CHECK_THROWS_AS(resolve(tiny), ValidationError);

    RunConfig outside;  // vortex outside its own plateau band
    outside.vortices = {{1.0, 0.5}};
    outside.cutoff.r_lo = 1.2;
    outside.cutoff.r1 = 1.5;
    outside.cutoff.r2 = 3.0;
    outside.cutoff.r_hi = 4.0;
    CHECK_THROWS_AS(resolve(outside), ValidationError);

    RunConfig cramped;  // rmax below the support of the sources
    cramped.vortices = {{1.0, 0.5}};
    cramped.rmax = 3.0;
    CHECK_THROWS_AS(resolve(cramped), ValidationError);
}

TEST_CASE("vacuum run: exact zeros, clean exit, canonical summary") {
    RunConfig cfg;
    cfg.params = {2.0, 2.0};
    cfg.charge = 0;
    cfg.Nr = 64;
    cfg.Nt = 16;
    RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.failure.empty());
    CHECK(res.flux_value == 0.0);
    CHECK(res.charge_estimate == 0.0);
    CHECK(res.action_density == 0.0);
    CHECK(res.action_flux == 0.0);
    CHECK(res.bracket_violations == 0);
    CHECK(!res.ladder.has_value());
    CHECK(res.winding.empty());
    CHECK(summary_line(res) ==
          "N=0 flux/2pi=0.000000 action/2pi^2=0.000000 sd_residual=0.000e+00");
}

TEST_CASE("N=1 run at modest resolution: invariants, report shape, artifacts") {
    RunConfig cfg;
    cfg.params = {2.0, 2.0};
    cfg.vortices = {{1.0, 0.5}};
    cfg.Nr = 128;
    cfg.Nt = 32;
    cfg.ladder_rungs = 3;
    cfg.ladder_t_samples = 128;
    cfg.out_dir = "/tmp/hcv_pipe_a";
    std::filesystem::remove_all(cfg.out_dir);

    RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.solve_report.converged);
    CHECK(res.charge_estimate == doctest::Approx(1.0).epsilon(0.12));
    CHECK(res.action_density / (2.0 * M_PI * M_PI) == doctest::Approx(1.0).epsilon(0.12));
    CHECK(res.bracket_violations == 0);
    REQUIRE(res.winding.size() == 1);
    CHECK(res.winding[0] == 1);
    REQUIRE(res.ladder.has_value());
    CHECK(res.ladder->rungs.size() == 3);
    CHECK(!res.near_axis.has_value());  // 128 rows leave under 5 fit rows
    CHECK(res.far_field.pass);
    CHECK(res.flux_identity.four_pi_n == doctest::Approx(4.0 * M_PI));
    CHECK(res.flux_identity.g_quadrature ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-5));
    // the smooth-vs-g gap carries the O(h) axis extrapolation error; it only
    // has to be bounded here, the refinement study lives in the acceptance run
    CHECK(res.flux_identity.identity_gap < 2.0);

    write_artifacts(cfg, res);
    namespace fs = std::filesystem;
    for (const char* f : {"report.json", "v.csv", "u.csv", "phi2.csv", "F_tr.csv"})
        CHECK(fs::exists(fs::path(cfg.out_dir) / f));

    const std::string rep = slurp(fs::path(cfg.out_dir) / "report.json");
    for (const char* key :
         {"\"flux\"", "\"charge\"", "\"action_density\"", "\"action_flux\"",
          "\"residual_sd1\"", "\"residual_sd2\"", "\"energy_identity\"", "\"windings\"",
          "\"diagnostics\"", "\"config\"", "\"ladder\""})
        CHECK(rep.find(key) != std::string::npos);
    CHECK(rep.find("near_axis") != std::string::npos);
    CHECK(rep.find("skipped") != std::string::npos);

    // a second identical run serializes to identical bytes
    RunConfig cfg2 = cfg;
    cfg2.out_dir = "/tmp/hcv_pipe_b";
    std::filesystem::remove_all(cfg2.out_dir);
    RunResult res2 = run(cfg2);
    write_artifacts(cfg2, res2);
    CHECK(slurp(fs::path(cfg.out_dir) / "v.csv") == slurp(fs::path(cfg2.out_dir) / "v.csv"));
    const std::string repA = slurp(fs::path(cfg.out_dir) / "report.json");
    std::string repB = slurp(fs::path(cfg2.out_dir) / "report.json");
    // only the echoed output directory may differ
    size_t pos;
    while ((pos = repB.find("hcv_pipe_b")) != std::string::npos)
        repB.replace(pos, 10, "hcv_pipe_a");
    CHECK(repA == repB);
    std::filesystem::remove_all(cfg.out_dir);
    std::filesystem::remove_all(cfg2.out_dir);
}
