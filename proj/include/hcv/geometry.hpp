#pragma once

#include <utility>

#include "hcv/errors.hpp"

// Geometry of the reduced strip: the hyperbolic-caloron background on
// H^3 x S^1 collapses to the half-cylinder {r > 0} x S^1_beta carrying the
// conformal factor Xi(r) = (S/2) sinh(2r/S).  Everything here is a pure
// function of (S, beta, r).

namespace hcv {

struct PhysicalParams {
    double S = 2.0;     // curvature scale of H^3
    double beta = 2.0;  // temporal period

    void validate() const;
};

// Xi(r) = (S/2) sinh(2r/S).  Series fallback for 2r/S < 1e-4 so the
// near-axis decay tests are not polluted by sinh cancellation noise.
double conformal_factor(const PhysicalParams& p, double r);

// d(Xi)/dr = cosh(2r/S)
double conformal_factor_dr(const PhysicalParams& p, double r);

// r = (S/2) atanh(R/S) for hyperbolic radius R in [0, S)
double coordinate_map_R_to_r(const PhysicalParams& p, double R);

// inverse map, R = S tanh(2r/S)
double coordinate_map_r_to_R(const PhysicalParams& p, double r);

// (1/Xi^2, Xi^2); callers must never ask for the axis value
std::pair<double, double> metric_weight(const PhysicalParams& p, double r);

// 2/Xi^2, the nonlinearity weight of the governing equation
double metric_weight_q(const PhysicalParams& p, double r);

// wrap t into [0, beta)
double wrap_t(double t, double beta);

// wrap a t-difference into [-beta/2, beta/2)
double wrap_dt(double dt, double beta);

}  // namespace hcv
