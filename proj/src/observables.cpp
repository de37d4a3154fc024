#include "hcv/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcv/errors.hpp"
#include "hcv/geometry.hpp"

namespace hcv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double principal(double x) { return x - 2.0 * kPi * std::round(x / (2.0 * kPi)); }

// axis row from the first three interior rows (cubic through i=1,2,3)
void extrapolate_axis(ScalarField& f) {
    for (int k = 0; k < f.grid.Nt; ++k)
        f.at(0, k) = 3.0 * f.at(1, k) - 3.0 * f.at(2, k) + f.at(3, k);
}

struct LoopPath {
    int i_lo, i_hi, k_lo, k_hi;  // k unbounded ints, wrap via field accessors
};

LoopPath make_loop(const StripGrid& g, double rc, double tc, double rad) {
    if (!(rad > 0.0)) throw ValidationError("loop: radius must be positive");
    LoopPath lp;
    lp.i_lo = static_cast<int>(std::lround((rc - rad) / g.hr));
    lp.i_hi = static_cast<int>(std::lround((rc + rad) / g.hr));
    lp.k_lo = static_cast<int>(std::lround((tc - rad) / g.ht));
    lp.k_hi = static_cast<int>(std::lround((tc + rad) / g.ht));
    if (lp.i_lo < 1 || lp.i_hi >= g.Nr || lp.i_hi - lp.i_lo < 2)
        throw ValidationError("loop: rectangle leaves the interior rows");
    if (lp.k_hi - lp.k_lo < 2 || (lp.k_hi - lp.k_lo) >= g.Nt)
        throw ValidationError("loop: rectangle t-span invalid");
    return lp;
}

}  // namespace

std::pair<ScalarField, ScalarField> reconstruct_u(const ScalarField& v, const SourceData& src) {
    const StripGrid& g = v.grid;
    ScalarField u(g), phi2(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            const double r = g.r(i), t = g.t(k);
            u.at(i, k) = src.eval_u0(r, t) + v.at(i, k);
            phi2.at(i, k) = src.eval_expu0(r, t) * std::exp(v.at(i, k));
        }
    return {std::move(u), std::move(phi2)};
}

ScalarField curvature(const ScalarField& u, const PhysicalParams& p) {
    const StripGrid& g = u.grid;
    ScalarField F(g);
    for (int i = 1; i <= g.Nr; ++i) {
        const double Xi2 = conformal_factor(p, g.r(i)) * conformal_factor(p, g.r(i));
        for (int k = 0; k < g.Nt; ++k) F.at(i, k) = (1.0 - std::exp(u.at(i, k))) / Xi2;
    }
    extrapolate_axis(F);
    return F;
}

std::pair<double, double> flux(const ScalarField& F_tr) {
    const double Phi = integrate(F_tr);
    return {Phi, Phi / (2.0 * kPi)};
}

GaugeFields gauge_potentials(const ScalarField& u, const SourceData& src) {
    const StripGrid& g = u.grid;
    GaugeFields gf{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    ScalarField ut = gradient_t(u);
    ScalarField ur = gradient_r(u);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            const double r = g.r(i), t = g.t(k);
            double Th, Tr, Tt;
            try {
                Th = src.vortex_phase(r, t);
                const auto grad = src.vortex_phase_grad(r, t);
                Tr = grad.first;
                Tt = grad.second;
            } catch (const SingularPointError&) {  // node sits on a vortex
                Th = Tr = Tt = nan;
            }
            gf.Theta.at(i, k) = Th;
            gf.a_r.at(i, k) = -0.5 * ut.at(i, k) - Tr;
            gf.a_t.at(i, k) = 0.5 * ur.at(i, k) - Tt;
        }
    gf.F_tr = curvature(u, src.params());
    return gf;
}

SdResiduals selfduality_residual(const ScalarField& u, const GaugeFields& gf,
                                 const SourceData& src, double mask_radius, double r_cap) {
    const StripGrid& g = u.grid;
    const PhysicalParams& p = src.params();
    SdResiduals out;
    out.mask_radius = mask_radius > 0.0 ? mask_radius : 1.5 * g.hr;
    out.r_cap = r_cap > 0.0 ? r_cap : std::numeric_limits<double>::infinity();

    ScalarField phr(g), phi(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            const double amp = std::exp(0.5 * u.at(i, k));
            phr.at(i, k) = amp * std::cos(gf.Theta.at(i, k));
            phi.at(i, k) = amp * std::sin(gf.Theta.at(i, k));
        }
    ScalarField phr_r = gradient_r(phr), phr_t = gradient_t(phr);
    ScalarField phi_r = gradient_r(phi), phi_t = gradient_t(phi);
    ScalarField ur = gradient_r(u), ut = gradient_t(u);
    ScalarField curl_t = gradient_t(gf.a_r), curl_r = gradient_r(gf.a_t);

    std::vector<double> acc1, acc2, acc2d, accE;
    acc1.reserve(g.nodes());
    acc2.reserve(g.nodes());
    acc2d.reserve(g.nodes());
    accE.reserve(g.nodes());
    const double m2 = out.mask_radius * out.mask_radius;
    for (int i = 0; i <= g.Nr; ++i) {
        if (i < 2 || i > g.Nr - 2) continue;  // one-sided derivative rows
        const double r = g.r(i);
        if (r > out.r_cap) continue;
        const double Xi = conformal_factor(p, r);
        for (int k = 0; k < g.Nt; ++k) {
            const double t = g.t(k);
            bool masked = false;
            for (const auto& [rj, tj] : src.config().points) {
                const double dr = r - rj, dt = wrap_dt(t - tj, p.beta);
                if (dr * dr + dt * dt <= m2) {
                    masked = true;
                    break;
                }
            }
            if (masked) continue;
            // D phi = grad phi + i a phi, componentwise
            const double ar = gf.a_r.at(i, k), at = gf.a_t.at(i, k);
            const double Dr_re = phr_r.at(i, k) - ar * phi.at(i, k);
            const double Dr_im = phi_r.at(i, k) + ar * phr.at(i, k);
            const double Dt_re = phr_t.at(i, k) - at * phi.at(i, k);
            const double Dt_im = phi_t.at(i, k) + at * phr.at(i, k);
            const double s_re = Dr_re - Dt_im, s_im = Dr_im + Dt_re;
            acc1.push_back(s_re * s_re + s_im * s_im);
            const double eu = std::exp(u.at(i, k));
            const double curl = curl_t.at(i, k) - curl_r.at(i, k);
            const double r2v = Xi * Xi * curl - (1.0 - eu);
            acc2.push_back(r2v * r2v);
            const double r2def = Xi * Xi * gf.F_tr.at(i, k) - (1.0 - eu);
            acc2d.push_back(r2def * r2def);
            const double dphi2 = Dr_re * Dr_re + Dr_im * Dr_im + Dt_re * Dt_re + Dt_im * Dt_im;
            const double grad2 = ur.at(i, k) * ur.at(i, k) + ut.at(i, k) * ut.at(i, k);
            accE.push_back(std::abs(dphi2 - 0.5 * eu * grad2));
        }
    }
    const double cell = g.hr * g.ht;
    out.nodes_used = static_cast<long>(acc1.size());
    out.r1 = std::sqrt(pairwise_sum(acc1) * cell);
    out.r2 = std::sqrt(pairwise_sum(acc2) * cell);
    out.r2_definitional = std::sqrt(pairwise_sum(acc2d) * cell);
    out.energy_identity = pairwise_sum(accE) * cell;
    return out;
}

std::pair<double, double> action(const ScalarField& v, const SourceData& src) {
    const StripGrid& g = v.grid;
    const PhysicalParams& p = src.params();

    ScalarField rho(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k)
            rho.at(i, k) = src.eval_rho0(g.r(i), g.t(k)) + v.at(i, k);
    ScalarField rho_r = gradient_r(rho), rho_t = gradient_t(rho);

    ScalarField act(g), Ftr(g);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            const double r = g.r(i), t = g.t(k);
            const double eu = src.eval_expu0(r, t) * std::exp(v.at(i, k));
            if (i >= 1) {
                const double Xi = conformal_factor(p, r);
                const double dens = 2.0 * (1.0 - eu) * (1.0 - eu) / (Xi * Xi);
                act.at(i, k) = dens;
                Ftr.at(i, k) = (1.0 - eu) / (Xi * Xi);
            }
        }
    extrapolate_axis(act);  // density part of the axis row
    extrapolate_axis(Ftr);
    for (int i = 0; i <= g.Nr; ++i)
        for (int k = 0; k < g.Nt; ++k) {
            const double r = g.r(i), t = g.t(k);
            const double P = src.dist_product(r, t);
            const auto Ps = src.dist_product_grad_s(r, t);
            const double cr = Ps.first + P * rho_r.at(i, k);
            const double ct = Ps.second + P * rho_t.at(i, k);
            act.at(i, k) += std::exp(rho.at(i, k)) * (cr * cr + ct * ct);
            if (!std::isfinite(act.at(i, k)))
                throw InternalError("action: non-finite stabilized integrand node");
        }
    const double Sd = 0.5 * kPi * integrate(act);
    const double Sf = kPi * integrate(Ftr);
    return {Sd, Sf};
}

double loop_integral(const GaugeFields& gf, double rc, double tc, double rad) {
    const StripGrid& g = gf.a_r.grid;
    const LoopPath lp = make_loop(g, rc, tc, rad);
    double s = 0.0;
    for (int i = lp.i_lo; i < lp.i_hi; ++i)  // along +r at t_lo
        s += 0.5 * (gf.a_r.at(i, lp.k_lo) + gf.a_r.at(i + 1, lp.k_lo)) * g.hr;
    for (int k = lp.k_lo; k < lp.k_hi; ++k)  // along +t at r_hi
        s += 0.5 * (gf.a_t.at(lp.i_hi, k) + gf.a_t.at(lp.i_hi, k + 1)) * g.ht;
    for (int i = lp.i_lo; i < lp.i_hi; ++i)  // back along -r at t_hi
        s -= 0.5 * (gf.a_r.at(i, lp.k_hi) + gf.a_r.at(i + 1, lp.k_hi)) * g.hr;
    for (int k = lp.k_lo; k < lp.k_hi; ++k)  // back along -t at r_lo
        s -= 0.5 * (gf.a_t.at(lp.i_lo, k) + gf.a_t.at(lp.i_lo, k + 1)) * g.ht;
    return s;
}

int winding_number(const ScalarField& Theta, double rc, double tc, double rad) {
    const StripGrid& g = Theta.grid;
    const LoopPath lp = make_loop(g, rc, tc, rad);
    double acc = 0.0;
    auto step = [&](int i0, int k0, int i1, int k1) {
        acc += principal(Theta.at(i1, k1) - Theta.at(i0, k0));
    };
    for (int i = lp.i_lo; i < lp.i_hi; ++i) step(i, lp.k_lo, i + 1, lp.k_lo);
    for (int k = lp.k_lo; k < lp.k_hi; ++k) step(lp.i_hi, k, lp.i_hi, k + 1);
    for (int i = lp.i_hi; i > lp.i_lo; --i) step(i, lp.k_hi, i - 1, lp.k_hi);
    for (int k = lp.k_hi; k > lp.k_lo; --k) step(lp.i_lo, k, lp.i_lo, k - 1);
    return static_cast<int>(std::lround(acc / (2.0 * kPi)));
}

std::vector<int> windings(const GaugeFields& gf, const VortexConfig& cfg, double rad) {
    std::vector<int> out;
    out.reserve(cfg.points.size());
    for (const auto& [rj, tj] : cfg.points) out.push_back(winding_number(gf.Theta, rj, tj, rad));
    return out;
}

namespace {

Mat2c mat_mul(const Mat2c& A, const Mat2c& B) {
    return {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2],
            A[2] * B[1] + A[3] * B[3]};
}

}  // namespace

std::array<Mat2c, 4> ansatz_evaluate(const std::array<double, 3>& x, double phi1, double phi2,
                                     double a_r, double a_t, double dr_dR) {
    const double R = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (!(R > 0.0)) throw DomainError("ansatz_evaluate: spatial origin R = 0 excluded");
    const std::complex<double> I(0.0, 1.0);
    const Mat2c sigma[3] = {Mat2c{0.0, 1.0, 1.0, 0.0}, Mat2c{0.0, -I, I, 0.0},
                            Mat2c{1.0, 0.0, 0.0, -1.0}};
    Mat2c q{0.0, 0.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 4; ++c) q[c] += sigma[j][c] * (x[j] / R);
    const Mat2c q2 = mat_mul(q, q);
    const Mat2c id{1.0, 0.0, 0.0, 1.0};
    for (int c = 0; c < 4; ++c)
        if (std::abs(q2[c] - id[c]) > 1e-12)
            throw InternalError("ansatz_evaluate: q^2 deviates from the identity");

    std::array<Mat2c, 4> A;
    for (int c = 0; c < 4; ++c) A[0][c] = -0.5 * I * a_t * q[c];
    for (int j = 0; j < 3; ++j) {
        Mat2c dq;
        for (int c = 0; c < 4; ++c) dq[c] = sigma[j][c] / R - q[c] * (x[j] / (R * R));
        const Mat2c qdq = mat_mul(q, dq);
        for (int c = 0; c < 4; ++c)
            A[j + 1][c] = -0.5 * (I * a_r * dr_dR * (x[j] / R) * q[c] + I * phi1 * dq[c] +
                                  (phi2 + 1.0) * qdq[c]);
    }
    return A;
}

}  // namespace hcv
