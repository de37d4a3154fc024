#include "hcv/geometry.hpp"

#include <cmath>
#include <string>

namespace hcv {

void PhysicalParams::validate() const {
    if (!(S > 0.0) || !std::isfinite(S))
        throw ValidationError("PhysicalParams: S must be positive and finite, got " + std::to_string(S));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ValidationError("PhysicalParams: beta must be positive and finite, got " + std::to_string(beta));
}

double conformal_factor(const PhysicalParams& p, double r) {
    if (r < 0.0 || !std::isfinite(r))
        throw DomainError("conformal_factor: r must be >= 0, got " + std::to_string(r));
    const double x = 2.0 * r / p.S;
    if (x < 1e-4) {
        const double x2 = x * x;
        return r * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
    }
    return 0.5 * p.S * std::sinh(x);
}

double conformal_factor_dr(const PhysicalParams& p, double r) {
    if (r < 0.0 || !std::isfinite(r))
        throw DomainError("conformal_factor_dr: r must be >= 0, got " + std::to_string(r));
    return std::cosh(2.0 * r / p.S);
}

double coordinate_map_R_to_r(const PhysicalParams& p, double R) {
    if (R < 0.0 || R >= p.S || !std::isfinite(R))
        throw DomainError("coordinate_map_R_to_r: need 0 <= R < S, got R=" + std::to_string(R));
    return 0.5 * p.S * std::atanh(R / p.S);
}

double coordinate_map_r_to_R(const PhysicalParams& p, double r) {
    if (r < 0.0 || !std::isfinite(r))
        throw DomainError("coordinate_map_r_to_R: r must be >= 0, got " + std::to_string(r));
    return p.S * std::tanh(2.0 * r / p.S);
}

std::pair<double, double> metric_weight(const PhysicalParams& p, double r) {
    if (r == 0.0)
        throw SingularPointError("metric_weight: Xi(0) = 0, weight undefined on the axis");
    const double Xi = conformal_factor(p, r);
    const double Xi2 = Xi * Xi;
    return {1.0 / Xi2, Xi2};
}

double metric_weight_q(const PhysicalParams& p, double r) {
    const double Xi = conformal_factor(p, r);
    return 2.0 / (Xi * Xi);
}

double wrap_t(double t, double beta) {
    double w = t - beta * std::floor(t / beta);
    if (w >= beta) w -= beta;  // floor rounding can land exactly on beta
    if (w < 0.0) w += beta;
    return w;
}

double wrap_dt(double dt, double beta) {
    return dt - beta * std::round(dt / beta);
}

}  // namespace hcv
