#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "hcv/strip_grid.hpp"
#include "hcv/vortex_sources.hpp"

// Physical fields and functionals of the solved v: u = u0 + v, |phi|^2,
// the phase and gauge potentials, curvature F_tr, flux, the action computed
// two independent ways, Bogomolnyi residual norms, windings, and the
// pointwise 4-D su(2) ansatz.

namespace hcv {

struct GaugeFields {
    ScalarField a_r;    // -1/2 u_t - Theta_r
    ScalarField a_t;    // +1/2 u_r - Theta_t
    ScalarField F_tr;   // (1 - e^u)/Xi^2, axis row extrapolated
    ScalarField Theta;  // multivalued phase reduced to (-pi, pi] sums per vortex
};

struct SdResiduals {
    double r1 = 0.0;                // ||D_r phi + i D_t phi||  (masked L2)
    double r2 = 0.0;                // ||Xi^2 curl_h a - (1 - e^u)||  (masked L2)
    double r2_definitional = 0.0;   // same with curl replaced by F_tr: 0 by construction
    double energy_identity = 0.0;   // masked L1 of | |Dphi|^2 - (1/2)e^u|grad u|^2 |
    double mask_radius = 0.0;
    double r_cap = 0.0;
    long nodes_used = 0;
};

// u carries the -inf convention at vortex-coincident nodes; phi2 = e^{u0} e^v
// is assembled from the exact cutoff product so those nodes hold exactly 0
std::pair<ScalarField, ScalarField> reconstruct_u(const ScalarField& v, const SourceData& src);

// F_tr = (1 - e^u)/Xi^2 on rows 1..Nr, cubic extrapolation onto the axis row
ScalarField curvature(const ScalarField& u, const PhysicalParams& p);

// trapezoid-in-r quadrature of F_tr; returns (Phi, Phi/2pi)
std::pair<double, double> flux(const ScalarField& F_tr);

// phase from the closed cylinder form and its exact gradient; the u
// derivatives are finite differences.  Nodes that coincide with a vortex
// produce non-finite a entries there; every norm downstream masks them.
GaugeFields gauge_potentials(const ScalarField& u, const SourceData& src);

// masked residual norms.  mask_radius <= 0 selects the 1-cell default
// (1.5*hr); r_cap <= 0 disables the radial cap.  Excludes rows {0,1} and the
// two outermost rows (one-sided derivative rows), then d > mask_radius around
// every vortex and r <= r_cap.
SdResiduals selfduality_residual(const ScalarField& u, const GaugeFields& gf,
                                 const SourceData& src, double mask_radius = 0.0,
                                 double r_cap = 0.0);

// (S_density, S_flux): the density form integrates
//   2 Xi^-2 (1-e^u)^2 + e^u |grad u|^2
// with the singular factor handled exactly: e^u|grad u|^2 =
// e^rho |P grad s + P grad rho|^2, P = prod d_j, s = sum ln d_j^2,
// rho = rho0 + v.  S_flux = pi * Phi.
std::pair<double, double> action(const ScalarField& v, const SourceData& src);

// circulation of (a_r, a_t) around the axis-aligned rectangle of half-width
// `rad` centered at (rc, tc); counterclockwise in the z = r + i t chart.
// The smooth a carries no quantized holonomy: the closed-form small-loop
// value is O(rad^2), not -2pi m (the phase winding and the (1/2)du^perp
// circulation cancel exactly; windings live in Theta alone).
double loop_integral(const GaugeFields& gf, double rc, double tc, double rad);

// discrete winding of Theta around the same rectangle: sum of principal-value
// increments / 2pi, rounded; equals the enclosed multiplicity
int winding_number(const ScalarField& Theta, double rc, double tc, double rad);

// winding at each vortex point (duplicated points report their shared total)
std::vector<int> windings(const GaugeFields& gf, const VortexConfig& cfg, double rad = 0.3);

// 2x2 complex matrix, row-major {a00, a01, a10, a11}
using Mat2c = std::array<std::complex<double>, 4>;

// Pointwise 4-D gauge potential of the spherically reduced ansatz at spatial
// point x (|x| = R > 0), built from the strip data (phi1, phi2) = (Re phi,
// Im phi) and (a_r, a_t) evaluated at the matching (r, t):
//   A_0 = -1/2 i a_t q,
//   A_j = -1/2 ( i a_r r'(R) (x_j/R) q + i phi1 d_j q + (phi2 + 1) q d_j q ),
// q = x^j sigma^j / R, d_j q = sigma^j/R - q x_j/R^2.  The factors of i sit
// on the Hermitian pieces so every component lands in su(2); dr_dR supplies
// r'(R) from the radial chart in use (1 for the identity chart).
// Each A_mu is traceless and anti-Hermitian; q^2 = 1 is checked internally.
std::array<Mat2c, 4> ansatz_evaluate(const std::array<double, 3>& x, double phi1, double phi2,
                                     double a_r, double a_t, double dr_dR = 1.0);

}  // namespace hcv
