#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hcv/strip_grid.hpp"

using namespace hcv;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("grid construction and validation") {
    StripGrid g(64, 16, 8.0, 2.0);
    CHECK(g.hr == doctest::Approx(0.125).epsilon(1e-16));
    CHECK(g.ht == doctest::Approx(0.125).epsilon(1e-16));
    CHECK(g.nodes() == 65u * 16u);
    CHECK(g.wrap_k(-1) == 15);
    CHECK(g.wrap_k(16) == 0);
    CHECK_THROWS_AS(StripGrid(1, 16, 8.0, 2.0), ValidationError);
    CHECK_THROWS_AS(StripGrid(64, 4, 8.0, 2.0), ValidationError);
    CHECK_THROWS_AS(StripGrid(64, 16, -1.0, 2.0), ValidationError);
}

TEST_CASE("laplacian is exact on radial quadratics and zero on closure rows") {
    StripGrid g(32, 16, 4.0, 2.0);
    ScalarField f(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) f.at(i, k) = 3.0 * g.r(i) * g.r(i) - 0.5 * g.r(i);
    ScalarField lap = laplacian(f);
    for (int i = 1; i < g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) CHECK(lap.at(i, k) == doctest::Approx(6.0).epsilon(1e-11));
    for (int k = 0; k < g.Nt; ++k) {
        CHECK(lap.at(0, k) == 0.0);
        CHECK(lap.at(g.Nr, k) == 0.0);
    }
}

TEST_CASE("gradients: quadratic exactness in r incl. one-sided rows, periodicity in t") {
    StripGrid g(32, 64, 4.0, 2.0);
    ScalarField f(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k)
            f.at(i, k) = g.r(i) * g.r(i) + std::sin(2.0 * kPi * g.t(k) / g.beta);
    ScalarField fr = gradient_r(f), ft = gradient_t(f);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            CHECK(fr.at(i, k) == doctest::Approx(2.0 * g.r(i)).epsilon(1e-12));
            const double exact = (2.0 * kPi / g.beta) * std::cos(2.0 * kPi * g.t(k) / g.beta);
            CHECK(ft.at(i, k) == doctest::Approx(exact).scale(1.0).epsilon(0.013));
        }
    // central t-difference picks up the wrap correctly: shifting the sample
    // index by Nt changes nothing
    CHECK(ft.at(3, 0) == ft.at(3, g.Nt));
}

TEST_CASE("integrate: half-weighted end rows, full rectangle in t") {
    StripGrid g(20, 8, 5.0, 2.0);
    ScalarField one(g), lin(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            one.at(i, k) = 1.0;
            lin.at(i, k) = g.r(i);
        }
    CHECK(integrate(one) == doctest::Approx(5.0 * 2.0).epsilon(1e-14));
    CHECK(integrate(lin) == doctest::Approx(0.5 * 25.0 * 2.0).epsilon(1e-14));
}

TEST_CASE("pairwise sum: exact on adversarial cancellation, order-independent total") {
    // power-of-two alternating block cancels exactly at every bracket level,
    // so the trailing 1.0 must come through the 1e16-magnitude partials intact
    std::vector<double> x;
    for (int i = 0; i < 1024; ++i) x.push_back(i % 2 ? 1e16 : -1e16);
    x.push_back(1.0);
    CHECK(pairwise_sum(x) == 1.0);

    std::vector<double> y;
    for (int i = 1; i <= 4321; ++i) y.push_back(1.0 / i);
    const double once = pairwise_sum(y);
    CHECK(pairwise_sum(y) == once);  // deterministic replay
}

TEST_CASE("field finiteness guard") {
    StripGrid g(8, 8, 1.0, 2.0);
    ScalarField f(g);
    CHECK_NOTHROW(f.require_finite("test"));
    f.at(3, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(f.require_finite("test"), ValidationError);
}

TEST_CASE("csv dump format: header, 17 significant digits, LF endings") {
    StripGrid g(2, 8, 1.0, 2.0);
    ScalarField f(g);
    f.at(1, 2) = 1.0 / 3.0;
    const std::string path = "test_dump.csv";
    dump_csv(f, path);
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string body = ss.str();
    CHECK(body.substr(0, 10) == "r,t,value\n");
    CHECK(body.find("0.33333333333333331") != std::string::npos);
    CHECK(body.find('\r') == std::string::npos);
    // one record per node plus the header
    CHECK(std::count(body.begin(), body.end(), '\n') == 1 + 3 * 8);
    std::remove(path.c_str());
}
