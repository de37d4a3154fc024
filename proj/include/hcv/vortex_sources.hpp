#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "hcv/geometry.hpp"

// Analytic background data for N prescribed vortices p_j = (r_j, t_j) on the
// strip: the singular profile U0, the cutoff eta, u0 = sum_j eta_j U0_j, the
// compensating smooth source g with integral 4 pi N, the stable evaluation of
// e^{u0}, the singular/regular split, and the beta-periodic phase Theta.
//
// The cutoff is a per-vortex product eta_j(r,t) = a(r) * b(t - t_j): a is the
// radial quintic-smoothstep window on [r_lo,r1]/[r2,r_hi], b is a quintic
// window in the wrapped t-offset, identically 1 for |dt| <= bt1*beta and 0
// for |dt| >= bt2*beta < beta/2.  A purely radial cutoff would multiply U0
// clear around the cylinder, where the nearest-image distance has a kink at
// the antipodal seam t = t_j + beta/2; the resulting u0 is only Lipschitz
// there and the closed-form g misses the seam's distributional part, breaking
// the integral identity.  The t-window keeps each term supported away from
// its own seam, so u0 is C^2 and integral(g) = 4 pi N holds to quadrature
// precision.

namespace hcv {

struct VortexConfig {
    std::vector<std::pair<double, double>> points;  // (r_j, t_j), multiplicity by repetition

    int N() const { return int(points.size()); }
    // r_j > 0, t_j in [0, beta); near-coincident distinct points (within
    // 1e-6*beta) are rejected; exact repetition expresses multiplicity
    void validate(const PhysicalParams& p) const;
};

struct CutoffSpec {
    double r_lo = 0.0, r1 = 0.0, r2 = 0.0, r_hi = 0.0;  // radial break points
    double bt1 = 0.20, bt2 = 0.45;                      // t-window, fractions of beta

    void validate() const;
    // r_lo = min r_j/4, r1 = min r_j/2, r2 = 2 max r_j, r_hi = 4 max r_j;
    // for N = 0 the window defaults to S-scaled values (never evaluated)
    static CutoffSpec defaults_for(const VortexConfig& cfg, const PhysicalParams& p);
};

// value, first and second derivative of the C^2 quintic smoothstep on [0,1]
double smoothstep5(double x);
double smoothstep5_d1(double x);
double smoothstep5_d2(double x);

class SourceData {
  public:
    SourceData(PhysicalParams params, VortexConfig config, CutoffSpec cutoff);

    const PhysicalParams& params() const { return params_; }
    const VortexConfig& config() const { return config_; }
    const CutoffSpec& cutoff() const { return cutoff_; }

    // radial window a(r) and derivatives
    void eta_radial(double r, double& a, double& a1, double& a2) const;
    // t window b(dt) and derivatives w.r.t. the signed offset (dt pre-wrapped)
    void eta_temporal(double dt, double& b, double& b1, double& b2) const;

    // raw profile U0 = -sum ln(1 + d_j^-2); -inf at a vortex node
    double eval_U0(double r, double t) const;

    // u0 = sum_j eta_j U0_j; -inf at a vortex node, 0 outside [r_lo, r_hi]
    double eval_u0(double r, double t) const;

    // exp(u0) in the stable product-power form: exactly 0 at p_j, exactly 1
    // outside the cutoff support
    double eval_expu0(double r, double t) const;

    // compensating source, closed form; finite everywhere
    double eval_g(double r, double t) const;

    // analytic gradient of u0; only meaningful away from vortex nodes
    std::pair<double, double> grad_u0(double r, double t) const;

    // singular split: (s, U0 - s) with s = sum ln d_j^2
    std::pair<double, double> singular_split(double r, double t) const;

    // rho0 = u0 - s evaluated without forming the infinities; finite everywhere
    double eval_rho0(double r, double t) const;

    // product of distances prod_j d_j, and the finite closed form of
    // (prod_j d_j) * grad s = sum_k 2 (x-p_k)/d_k * prod_{j != k} d_j
    double dist_product(double r, double t) const;
    std::pair<double, double> dist_product_grad_s(double r, double t) const;

    // beta-periodic phase Theta = sum_j arg(e^{2 pi z/beta} - e^{2 pi p_j/beta})
    double vortex_phase(double r, double t) const;
    // analytic gradient (Theta_r, Theta_t) = (Im f'/f, Re f'/f)
    std::pair<double, double> vortex_phase_grad(double r, double t) const;

    // panel Gauss-Legendre quadrature of g over [0, r_upper] x [0, beta]:
    // panels split at the radial break points and at every t-window edge,
    // each subdivided (8 radial / 4 temporal), 24-point rule per panel
    double g_integral(double r_upper) const;

  private:
    PhysicalParams params_;
    VortexConfig config_;
    CutoffSpec cutoff_;
    double BT1_, BT2_;  // absolute t-window widths

    struct Term {  // per-vortex pieces at one point, wrapped offsets
        double dr, dt, d2;
        double eta, deta_r, deta_t, lap_eta;
        double a, b;
    };
    Term term_at(double rj, double tj, double r, double t) const;
};

}  // namespace hcv
