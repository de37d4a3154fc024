#include <doctest.h>

#include "hcv/diagnostics.hpp"
#include "hcv/errors.hpp"

using namespace hcv;

TEST_CASE("half-line Hardy bound holds across 200 random bumps") {
    HardyReport rep = hardy_check(200, 20240817u);
    CHECK(rep.trials == 200);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin <= rep.tol);
    // compact support away from the origin leaves real slack, not a near-tie
    CHECK(rep.worst_margin < 0.0);
    CHECK(rep.tol == 1e-6);
}

TEST_CASE("hardy batch is deterministic per seed and seed-insensitive in verdict") {
    HardyReport a = hardy_check(50, 7u);
    HardyReport b = hardy_check(50, 7u);
    CHECK(a.worst_margin == b.worst_margin);
    for (unsigned seed : {1u, 99u, 31415u}) {
        HardyReport r = hardy_check(50, seed);
        CHECK(r.violations == 0);
    }
    CHECK_THROWS_AS(hardy_check(0, 1u), ValidationError);
}
