#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "hcv/elliptic_solver.hpp"
#include "hcv/errors.hpp"

using namespace hcv;

namespace {

const PhysicalParams kP{2.0, 2.0};

SourceData vacuum_src() {
    VortexConfig cfg{};
    return SourceData(kP, cfg, CutoffSpec::defaults_for(cfg, kP));
}

SourceData n1_src(double r0 = 1.0, double t0 = 0.5) {
    VortexConfig cfg{{{r0, t0}}};
    return SourceData(kP, cfg, CutoffSpec::defaults_for(cfg, kP));
}

// residual with the mirror-row half weight, i.e. the symmetric form the CG
// actually sees
std::vector<double> scaled_residual(const ScalarField& v, const SourceData& src,
                                    const StripGrid& g) {
    ScalarField F = residual(v, src, g);
    std::vector<double> out;
    out.reserve(std::size_t(g.Nr) * g.Nt);
    for (int i = 1; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k)
            out.push_back((i == g.Nr ? 0.5 : 1.0) * F.at(i, k));
    return out;
}

}  // namespace

TEST_CASE("vacuum: zero field is an exact solution, accepted in one evaluation") {
    SourceData src = vacuum_src();
    StripGrid g(64, 16, 6.0, kP.beta);
    ScalarField v0(g);
    ScalarField F = residual(v0, src, g);
    for (double x : F.a) CHECK(x == 0.0);

    SolverConfig cfg;
    auto [v, rep] = solve(v0, src, g, cfg);
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    CHECK(rep.final_residual == 0.0);
    CHECK(rep.cg_iterations == 0);
    for (double x : v.a) CHECK(x == 0.0);
}

TEST_CASE("linearization is symmetric under the mirror-row half weight") {
    // off-node vortex so e^{u0} varies across every stencil
    SourceData src = n1_src(1.03, 0.47);
    StripGrid g(12, 8, 3.0, kP.beta);
    ScalarField v(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) v.at(i, k) = 0.1 * std::sin(0.7 * i + 1.3 * k) - 0.2;
    for (int k = 0; k < g.Nt; ++k) v.at(0, k) = 0.0;

    const int n = g.Nr * g.Nt;
    const double d = 1e-6;
    std::vector<std::vector<double>> J(static_cast<std::size_t>(n));
    for (int i = 1; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            ScalarField vp = v, vm = v;
            vp.at(i, k) += d;
            vm.at(i, k) -= d;
            const std::vector<double> Fp = scaled_residual(vp, src, g);
            const std::vector<double> Fm = scaled_residual(vm, src, g);
            std::vector<double>& col = J[std::size_t((i - 1) * g.Nt + k)];
            col.resize(std::size_t(n));
            for (int a = 0; a < n; ++a) col[std::size_t(a)] = (Fp[a] - Fm[a]) / (2.0 * d);
        }
    double asym = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            asym = std::max(asym, std::abs(J[a][std::size_t(b)] - J[b][std::size_t(a)]));
    CHECK(asym < 1e-7);
}

TEST_CASE("N=1 solve converges, stays in the barrier pinch, threads do not change bits") {
    SourceData src = n1_src();
    StripGrid g(128, 32, 8.0, kP.beta);
    ScalarField v0(g);
    SolverConfig cfg;

    Bracket br;
    br.lower = ScalarField(g);
    for (double& x : br.lower.a) x = -80.0;  // crude but valid sub-barrier floor
    br.upper = upper_barrier(src, g);
    auto [v, rep] = solve(v0, src, g, cfg, &br);
    CHECK(rep.converged);
    CHECK(rep.final_residual <= cfg.tol);
    CHECK(rep.bracket_violations == 0);
    CHECK(rep.iterations > 3);

    // same bits regardless of thread count: reductions are order-fixed
    SolverConfig cfg3 = cfg;
    cfg3.threads = 3;
    auto [v3, rep3] = solve(v0, src, g, cfg3, &br);
    REQUIRE(v3.a.size() == v.a.size());
    CHECK(std::memcmp(v3.a.data(), v.a.data(), v.a.size() * sizeof(double)) == 0);
    CHECK(rep3.iterations == rep.iterations);
    CHECK(rep3.cg_iterations == rep.cg_iterations);

    // independent start inside the pinch lands on the same solution
    ScalarField v0b(g);
    for (int i = 1; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) v0b.at(i, k) = -0.5;
    auto [vb, repb] = solve(v0b, src, g, cfg);
    CHECK(repb.converged);
    double dmax = 0.0;
    for (std::size_t j = 0; j < v.a.size(); ++j)
        dmax = std::max(dmax, std::abs(v.a[j] - vb.a[j]));
    CHECK(dmax < 1e-8);
}

TEST_CASE("translating the vortex by whole t-nodes translates the solution") {
    StripGrid g(96, 24, 8.0, kP.beta);
    const int shift = 8;
    const double dt = shift * g.ht;
    SourceData srcA = n1_src(1.0, 0.25);
    SourceData srcB = n1_src(1.0, 0.25 + dt);
    SolverConfig cfg;
    ScalarField z(g);
    auto [vA, repA] = solve(z, srcA, g, cfg);
    auto [vB, repB] = solve(z, srcB, g, cfg);
    CHECK(repA.converged);
    CHECK(repB.converged);
    double dmax = 0.0;
    for (int i = 1; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k)
            dmax = std::max(dmax, std::abs(vB.at(i, (k + shift) % g.Nt) - vA.at(i, k)));
    // identical up to reduction-order rounding in the CG inner products
    CHECK(dmax < 1e-9);
}

TEST_CASE("configuration and bracket validation") {
    SourceData src = vacuum_src();
    StripGrid g(16, 8, 4.0, kP.beta);
    ScalarField v0(g);

    SolverConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve(v0, src, g, bad), ValidationError);
    bad = SolverConfig{};
    bad.threads = 0;
    CHECK_THROWS_AS(solve(v0, src, g, bad), ValidationError);
    bad = SolverConfig{};
    bad.max_newton = 0;
    CHECK_THROWS_AS(solve(v0, src, g, bad), ValidationError);

    StripGrid g2(16, 8, 5.0, kP.beta);
    ScalarField w(g2);
    CHECK_THROWS_AS(residual(w, src, g), ValidationError);
    CHECK_THROWS_AS(solve(w, src, g, SolverConfig{}), ValidationError);

    Bracket br;
    br.lower = ScalarField(g);
    br.upper = ScalarField(g);
    br.upper.at(3, 2) = -1.0;  // lower(3,2)=0 > upper(3,2)
    CHECK_THROWS_AS(solve(v0, src, g, SolverConfig{}, &br), ValidationError);

    br.upper.at(3, 2) = 2.0;
    ScalarField esc(g);
    esc.at(4, 4) = 3.0;  // above upper = 0 there
    CHECK_THROWS_AS(solve(esc, src, g, SolverConfig{}, &br), ValidationError);
}

TEST_CASE("lift_profile: -inf left of support, interpolated inside, held right") {
    StripGrid g(8, 8, 4.0, kP.beta);  // hr = 0.5
    std::vector<double> pr{1.0, 2.0, 3.0};
    std::vector<double> pw{-1.0, -2.0, -3.0};
    ScalarField L = lift_profile(pr, pw, g);
    CHECK(std::isinf(L.at(1, 0)));
    CHECK(L.at(1, 0) < 0.0);
    CHECK(L.at(2, 3) == doctest::Approx(-1.0));   // r = 1.0
    CHECK(L.at(3, 0) == doctest::Approx(-1.5));   // r = 1.5
    CHECK(L.at(6, 5) == doctest::Approx(-3.0));   // r = 3.0
    CHECK(L.at(8, 1) == doctest::Approx(-3.0));   // held beyond the last node
    for (int k = 1; k < g.Nt; ++k) CHECK(L.at(5, k) == L.at(5, 0));

    CHECK_THROWS_AS(lift_profile({1.0, 0.5}, {0.0, 0.0}, g), ValidationError);
    CHECK_THROWS_AS(lift_profile({1.0}, {0.0, 0.0}, g), ValidationError);
}

TEST_CASE("upper barrier is -u0, +inf exactly at a nodal vortex") {
    StripGrid g(32, 16, 4.0, kP.beta);  // hr = 0.125, ht = 0.125
    SourceData src = n1_src(1.0, 0.5);  // i = 8, k = 4
    ScalarField U = upper_barrier(src, g);
    CHECK(std::isinf(U.at(8, 4)));
    CHECK(U.at(8, 4) > 0.0);
    CHECK(U.at(20, 9) == doctest::Approx(-src.eval_u0(g.r(20), g.t(9))).epsilon(1e-14));
    CHECK(U.at(2, 1) == 0.0);  // u0 = 0 below the cutoff band
}
