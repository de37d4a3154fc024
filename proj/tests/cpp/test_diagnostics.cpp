#include <doctest.h>

#include <cmath>
#include <vector>

#include "hcv/diagnostics.hpp"
#include "hcv/errors.hpp"

using namespace hcv;

namespace {

const PhysicalParams kP{2.0, 2.0};

SourceData n1_src() {
    VortexConfig cfg{{{1.0, 0.5}}};
    return SourceData(kP, cfg, CutoffSpec::defaults_for(cfg, kP));
}

SourceData vacuum_src() {
    VortexConfig cfg{};
    return SourceData(kP, cfg, CutoffSpec::defaults_for(cfg, kP));
}

}  // namespace

TEST_CASE("manufactured Laplacian matches a finite-difference stencil") {
    const double rmax = 14.0, A = 0.5, d = 1e-4;
    for (double r : {1.3, 5.0, 9.7})
        for (double t : {0.1, 0.8, 1.9}) {
            const auto f = [&](double rr, double tt) {
                return manufactured_v(kP, rmax, A, rr, tt);
            };
            const double lap_fd = (f(r + d, t) - 2.0 * f(r, t) + f(r - d, t)) / (d * d) +
                                  (f(r, t + d) - 2.0 * f(r, t) + f(r, t - d)) / (d * d);
            CHECK(manufactured_lap(kP, rmax, A, r, t) ==
                  doctest::Approx(lap_fd).epsilon(1e-6));
        }
    // exact zeros at both radial boundaries keep every discrete row consistent
    CHECK(manufactured_v(kP, 14.0, 0.5, 0.0, 0.3) == 0.0);
    CHECK(manufactured_v(kP, 14.0, 0.5, 14.0, 0.3) == doctest::Approx(0.0).epsilon(1e-28));
}

TEST_CASE("manufactured convergence without background reproduces the pinned ladder") {
    MmsStudy study;
    study.params = kP;
    study.rmax = 14.0;
    study.amplitude = 0.5;
    study.meshes = {{32, 8}, {64, 16}, {128, 32}, {256, 64}};
    MmsReport rep = mms_convergence(study);
    REQUIRE(rep.errors.size() == 4);
    CHECK(rep.errors[0] == doctest::Approx(9.340135e-3).epsilon(1e-5));
    CHECK(rep.errors[1] == doctest::Approx(2.289895e-3).epsilon(1e-5));
    CHECK(rep.errors[2] == doctest::Approx(5.697150e-4).epsilon(1e-5));
    CHECK(rep.errors[3] == doctest::Approx(1.422573e-4).epsilon(1e-5));
    CHECK(rep.orders[0] == doctest::Approx(2.028).epsilon(1e-2));
    CHECK(rep.orders[1] == doctest::Approx(2.007).epsilon(1e-2));
    CHECK(rep.orders[2] == doctest::Approx(2.002).epsilon(1e-2));
    CHECK(rep.order > 1.9);
    CHECK(rep.pass);

    MmsStudy bad = study;
    bad.meshes = {{32, 8}, {64, 16}};
    CHECK_THROWS_AS(mms_convergence(bad), ValidationError);
}

TEST_CASE("manufactured convergence holds on the vortex background too") {
    MmsStudy study;
    study.params = kP;
    study.background = n1_src();
    study.rmax = 14.0;
    study.amplitude = 0.5;
    study.meshes = {{32, 8}, {64, 16}, {128, 32}};
    MmsReport rep = mms_convergence(study);
    CHECK(rep.pass);
    CHECK(rep.order == doctest::Approx(2.0).epsilon(5e-2));
    for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
        CHECK(rep.errors[i + 1] < rep.errors[i]);
}

TEST_CASE("near-axis fit window must hold at least five rows") {
    SourceData src = n1_src();
    // r_lo/2 = 0.125, hr = 14/512: window [0.0547, 0.125] holds 3 rows only
    StripGrid g(512, 8, 14.0, kP.beta);
    ScalarField v(g);
    CHECK_THROWS_AS(near_axis_decay(v, src, 0.2), ValidationError);

    // vacuum window on a fine mesh: vacuously passing report
    StripGrid gf(512, 8, 4.0, kP.beta);
    ScalarField vz(gf);
    NearAxisReport rep = near_axis_decay(vz, vacuum_src(), 0.2);
    CHECK(rep.vacuous);
    CHECK(rep.pass);
    CHECK(rep.nodes >= 5);
}

TEST_CASE("far-field fit flags an unsettled plateau, passes a settled one") {
    SourceData src = n1_src();
    StripGrid g(128, 16, 14.0, kP.beta);

    // synthetic field with the right asymptote: c + e^{-2r} modulation
    ScalarField v(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k)
            v.at(i, k) = -0.8 + 0.5 * std::exp(-2.0 * g.r(i)) * (1.0 + 0.1 * std::cos(M_PI * k / 4.0));
    for (int k = 0; k < g.Nt; ++k) v.at(0, k) = 0.0;
    FarFieldReport rep = far_field_decay(v, src);
    CHECK(rep.rate == doctest::Approx(2.0).epsilon(5e-2));
    CHECK(rep.v_plateau == doctest::Approx(-0.8).epsilon(1e-6));
    CHECK(rep.plateau_variation < 1e-3);

    // a still-sloping far field is a truncation error, not a fit input
    ScalarField w(g);
    for (int i = 1; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) w.at(i, k) = -0.01 * g.r(i);
    CHECK_THROWS_AS(far_field_decay(w, src), TruncationTooSmallError);
}

TEST_CASE("averaged flux identity: vacuum is exactly balanced") {
    SourceData src = vacuum_src();
    StripGrid g(64, 16, 6.0, kP.beta);
    ScalarField v(g);
    FluxIdentityReport rep = averaged_flux_identity(v, src);
    CHECK(rep.lap_integral == 0.0);
    CHECK(rep.smooth_integral == 0.0);
    CHECK(rep.g_quadrature == 0.0);
    CHECK(rep.four_pi_n == 0.0);
    CHECK(rep.identity_gap == 0.0);
}

TEST_CASE("gradient L2 on a linear-in-r field matches the closed form") {
    StripGrid g(100, 16, 5.0, kP.beta);
    ScalarField v(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) v.at(i, k) = 3.0 * g.r(i);
    // |grad v|^2 = 9 over the whole strip; sqrt(9 * area(r >= 1))
    const double want = std::sqrt(9.0 * (5.0 - 1.0) * kP.beta);
    CHECK(gradient_l2(v, 1.0) == doctest::Approx(want).epsilon(2e-2));
}
