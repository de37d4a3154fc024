#include <doctest.h>

#include <cmath>

#include "hcv/errors.hpp"
#include "hcv/geometry.hpp"

using namespace hcv;

TEST_CASE("conformal factor matches the closed form and its series tail") {
    PhysicalParams p{2.0, 2.0};
    CHECK(conformal_factor(p, 1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(conformal_factor(p, 0.0) == 0.0);

    PhysicalParams ps{0.7, 2.0};
    for (double r : {1e-9, 1e-6, 4.9e-5 * 0.35, 0.3, 2.0}) {
        const double exact = (ps.S / 2.0) * std::sinh(2.0 * r / ps.S);
        CHECK(conformal_factor(ps, r) == doctest::Approx(exact).epsilon(1e-14));
    }
    // series / sinh handoff: both sides of the switch agree with the closed
    // form, so the branches meet without a jump
    const double x0 = 1e-4 * 0.35;  // 2r/S = 1e-4 at S = 0.7
    for (double r : {x0 * (1 - 1e-9), x0 * (1 + 1e-9)}) {
        const double exact = (ps.S / 2.0) * std::sinh(2.0 * r / ps.S);
        CHECK(conformal_factor(ps, r) == doctest::Approx(exact).epsilon(1e-14));
    }
}

TEST_CASE("derivative and metric weights") {
    PhysicalParams p{2.0, 2.0};
    CHECK(conformal_factor_dr(p, 0.7) == doctest::Approx(std::cosh(0.7)).epsilon(1e-15));
    auto [inv2, Xi2] = metric_weight(p, 1.3);
    const double Xi = conformal_factor(p, 1.3);
    CHECK(Xi2 == doctest::Approx(Xi * Xi).epsilon(1e-15));
    CHECK(inv2 * Xi2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(metric_weight_q(p, 1.3) == doctest::Approx(2.0 / (Xi * Xi)).epsilon(1e-15));
    CHECK_THROWS_AS(metric_weight(p, 0.0), SingularPointError);
}

TEST_CASE("coordinate maps are mutually inverse") {
    PhysicalParams p{2.0, 2.0};
    // the inverse map steepens like e^{2r/S} toward the chart edge, so the
    // roundtrip tolerance carries that amplification (r=8: ~1e-11 relative)
    for (double r : {0.01, 0.5, 1.0, 3.0, 8.0}) {
        const double R = coordinate_map_r_to_R(p, r);
        CHECK(R < p.S);
        CHECK(coordinate_map_R_to_r(p, R) == doctest::Approx(r).epsilon(1e-10));
    }
    CHECK_THROWS_AS(coordinate_map_R_to_r(p, p.S), DomainError);
    CHECK_THROWS_AS(coordinate_map_R_to_r(p, -0.1), DomainError);
    CHECK_THROWS_AS(conformal_factor(p, -1.0), DomainError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PhysicalParams({-1.0, 2.0}).validate(), ValidationError);
    CHECK_THROWS_AS(PhysicalParams({2.0, 0.0}).validate(), ValidationError);
    CHECK_NOTHROW(PhysicalParams({2.0, 2.0}).validate());
}

TEST_CASE("t wrapping") {
    CHECK(wrap_t(2.5, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(wrap_t(-0.25, 2.0) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(wrap_t(0.0, 2.0) == 0.0);
    CHECK(wrap_dt(1.75, 2.0) == doctest::Approx(-0.25).epsilon(1e-15));
    // round-half-away ties: each exact half maps to the opposite representative
    CHECK(wrap_dt(-1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(wrap_dt(1.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(wrap_dt(0.3, 2.0) == doctest::Approx(0.3).epsilon(1e-15));
}
