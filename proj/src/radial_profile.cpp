#include "hcv/radial_profile.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "hcv/errors.hpp"
#include "hcv/geometry.hpp"

namespace hcv {

namespace {

// first-order one-sided closure at the ends, central inside
std::vector<double> gradient_1d(const std::vector<double>& a, double h) {
    const std::size_t n = a.size();
    std::vector<double> g(n);
    if (n < 2) throw ValidationError("gradient_1d: need at least 2 nodes");
    g[0] = (a[1] - a[0]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (a[i + 1] - a[i - 1]) / (2.0 * h);
    g[n - 1] = (a[n - 1] - a[n - 2]) / h;
    return g;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

// residual of the discrete BVP; rows idx = 1..m
double residual_1d(const std::vector<double>& w, const std::vector<double>& qv,
                   const std::vector<double>& G, double h, int m, bool neumann_right,
                   std::vector<double>& F) {
    const double h2 = h * h;
    const int n = static_cast<int>(w.size()) - 1;
    double worst = 0.0;
    for (int idx = 1; idx <= m; ++idx) {
        double lap;
        if (neumann_right && idx == n)
            lap = 2.0 * (w[n - 1] - w[n]) / h2;  // mirror closure, zero slope
        else
            lap = (w[idx + 1] - 2.0 * w[idx] + w[idx - 1]) / h2;
        F[idx - 1] = lap - qv[idx] * (std::exp(w[idx]) - 1.0) - G[idx];
        worst = std::max(worst, std::abs(F[idx - 1]));
    }
    return worst;
}

void thomas_solve(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<double>& c, const std::vector<double>& rhs,
                  std::vector<double>& x) {
    const int m = static_cast<int>(b.size());
    std::vector<double> cp(m), dp(m);
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for (int i = 1; i < m; ++i) {
        const double den = b[i] - a[i] * cp[i - 1];
        if (den == 0.0) throw InternalError("radial Jacobian lost diagonal dominance");
        cp[i] = c[i] / den;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / den;
    }
    x[m - 1] = dp[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
}

}  // namespace

MajorantG compute_majorant(const SourceData& src, const std::vector<double>& r_nodes,
                           int t_samples) {
    if (t_samples < 64)
        throw ValidationError("compute_majorant: need at least 64 angular samples");
    if (r_nodes.size() < 2) throw ValidationError("compute_majorant: need at least 2 nodes");
    const double beta = src.params().beta;
    MajorantG out;
    out.r = r_nodes;
    out.G.assign(r_nodes.size(), 0.0);
    for (std::size_t i = 0; i < r_nodes.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < t_samples; ++k)
            best = std::max(best, src.eval_g(r_nodes[i], k * (beta / t_samples)));
        out.G[i] = std::max(0.0, best);
    }
    return out;
}

RadialProfile solve_truncated(const PhysicalParams& p, const MajorantG& G, double eps, double K,
                              double tol, bool neumann_right, const std::vector<double>* w0,
                              int max_iter) {
    p.validate();
    if (!(eps > 0.0) || !(K > eps)) throw ValidationError("solve_truncated: need 0 < eps < K");
    if (G.r.size() != G.G.size() || G.r.size() < 3)
        throw ValidationError("solve_truncated: malformed majorant");
    const double h = G.r[1] - G.r[0];
    const int n = static_cast<int>(std::lround((K - eps) / h));
    if (static_cast<std::size_t>(n) + 1 != G.r.size())
        throw ValidationError("solve_truncated: majorant grid does not span [eps, K]");
    for (int i = 0; i <= n; ++i)
        if (std::abs(G.r[i] - (eps + i * h)) > 1e-9)
            throw ValidationError("solve_truncated: majorant grid is not uniform on [eps, K]");
    // the sub-solution argument needs supp G strictly inside the truncation
    if (G.G.front() != 0.0 || G.G.back() != 0.0)
        throw ValidationError("solve_truncated: majorant must vanish at both truncation ends");

    std::vector<double> qv(n + 1);
    for (int i = 0; i <= n; ++i) qv[i] = metric_weight_q(p, G.r[i]);

    std::vector<double> w(n + 1, 0.0);
    if (w0) {
        if (w0->size() != w.size())
            throw ValidationError("solve_truncated: initial guess has wrong length");
        w = *w0;
    }
    const int m = neumann_right ? n : n - 1;
    std::vector<double> F(m), Ft(m), a(m), b(m), c(m), rhs(m), delta(m), wt(w);

    // the FD residual cannot drop below roundoff of the second difference;
    // fold that floor into the convergence test so fine grids do not spin
    auto eff_tol = [&](void) {
        return std::max(tol, 4.0 * std::max(1.0, max_abs(w)) * DBL_EPSILON / (h * h));
    };

    int it = 0;
    double res = residual_1d(w, qv, G.G, h, m, neumann_right, F);
    double floor_now = eff_tol();
    for (; it < max_iter; ++it) {
        if (res < floor_now) break;
        for (int i = 0; i < m; ++i) {
            a[i] = 1.0 / (h * h);
            c[i] = 1.0 / (h * h);
            b[i] = -2.0 / (h * h) - qv[i + 1] * std::exp(w[i + 1]);
            rhs[i] = -F[i];
        }
        if (neumann_right) a[m - 1] = 2.0 / (h * h);
        thomas_solve(a, b, c, rhs, delta);
        // damped step: halve until the residual improves, then accept the
        // trial unconditionally (a stalled tiny step is harmless)
        double lam = 1.0;
        double rest = res;
        for (int half = 0; half < 30; ++half) {
            wt = w;
            for (int i = 0; i < m; ++i) wt[i + 1] = w[i + 1] + lam * delta[i];
            rest = residual_1d(wt, qv, G.G, h, m, neumann_right, Ft);
            if (rest < res) break;
            lam *= 0.5;
        }
        w = wt;
        F = Ft;
        res = rest;
        floor_now = eff_tol();
    }
    if (res >= floor_now)
        throw IterativeFailureError("radial Newton exhausted its iteration budget", res);

    RadialProfile prof;
    prof.r = G.r;
    prof.w = std::move(w);
    prof.w_infinity = std::numeric_limits<double>::quiet_NaN();
    prof.n = 0;
    prof.neumann_right = neumann_right;
    prof.iterations = it;
    prof.final_residual = res;
    prof.residual_floor = floor_now;
    return prof;
}

double energy_functional(const PhysicalParams& p, const MajorantG& G, const RadialProfile& prof) {
    const std::size_t n = prof.w.size();
    if (G.G.size() != n || n < 2) throw ValidationError("energy_functional: size mismatch");
    const double h = prof.r[1] - prof.r[0];
    double grad = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = (prof.w[i + 1] - prof.w[i]) / h;
        grad += d * d;
    }
    grad *= 0.5 * h;
    double integ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = metric_weight_q(p, prof.r[i]);
        const double val = q * (std::exp(prof.w[i]) - 1.0 - prof.w[i]) + G.G[i] * prof.w[i];
        integ += (i == 0 || i + 1 == n) ? 0.5 * val : val;
    }
    return grad + integ * h;
}

LadderResult monotone_ladder(const PhysicalParams& p, const SourceData& src,
                             const std::vector<std::pair<double, double>>& schedule, double h,
                             int t_samples, double align_tol) {
    if (schedule.size() < 2) throw ValidationError("monotone_ladder: need at least 2 rungs");
    if (!(h > 0.0)) throw ValidationError("monotone_ladder: h must be positive");
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (!(schedule[i + 1].first < schedule[i].first) ||
            !(schedule[i + 1].second > schedule[i].second))
            throw ValidationError("monotone_ladder: truncations must be strictly nested");

    LadderResult out;
    for (std::size_t s = 0; s < schedule.size(); ++s) {
        const double eps = schedule[s].first;
        if (!(eps > 0.0)) throw ValidationError("monotone_ladder: eps must be positive");
        const double K = std::ceil(schedule[s].second / h - 1e-12) * h;  // snap up to the h-grid
        const int n = static_cast<int>(std::lround((K - eps) / h));
        std::vector<double> nodes(n + 1);
        for (int i = 0; i <= n; ++i) nodes[i] = eps + i * h;
        MajorantG G = compute_majorant(src, nodes, t_samples);
        RadialProfile prof = solve_truncated(p, G, eps, K);
        prof.n = static_cast<int>(s) + 1;
        out.I.push_back(energy_functional(p, G, prof));
        if (s + 1 == schedule.size()) {
            // limit profile: swap the right pin for the mirror closure on the
            // finest rung's own grid (cold start, same discretization)
            out.limit = solve_truncated(p, G, eps, K, 1e-10, true);
            out.limit.n = prof.n;
        }
        out.rungs.push_back(std::move(prof));
    }

    for (std::size_t s = 0; s + 1 < out.rungs.size(); ++s) {
        const RadialProfile& prev = out.rungs[s];
        const RadialProfile& next = out.rungs[s + 1];
        const int i0 = static_cast<int>(std::lround((prev.r.front() - next.r.front()) / h));
        if (i0 < 0 || i0 + prev.r.size() > next.r.size() ||
            std::abs(next.r[i0] - prev.r.front()) > align_tol ||
            std::abs(next.r[i0 + prev.r.size() - 1] - prev.r.back()) > align_tol)
            throw InternalError("monotone_ladder: rung grids do not share common nodes");
        double margin = -std::numeric_limits<double>::infinity();
        double sup = 0.0;
        for (std::size_t j = 0; j < prev.r.size(); ++j) {
            const double d = next.w[i0 + j] - prev.w[j];
            margin = std::max(margin, d);
            sup = std::max(sup, std::abs(d));
        }
        out.order_margin.push_back(margin);
        out.sup_change.push_back(sup);
    }

    const std::size_t len = out.limit.w.size();
    const std::size_t i10 = static_cast<std::size_t>(len * 0.9);
    double acc = 0.0;
    for (std::size_t i = i10; i < len; ++i) acc += out.limit.w[i];
    out.w_infinity = acc / static_cast<double>(len - i10);
    out.limit.w_infinity = out.w_infinity;
    return out;
}

DecayReport check_decay_bounds(const PhysicalParams& p, const RadialProfile& prof, double K0,
                               double fit_hi) {
    if (prof.r.size() < 8) throw ValidationError("check_decay_bounds: profile too short");
    const double h = prof.r[1] - prof.r[0];
    const std::vector<double> wr = gradient_1d(prof.w, h);
    const std::vector<double> wrr = gradient_1d(wr, h);
    DecayReport rep;
    rep.tol = 10.0 * h * h;
    const double r_end = prof.r.back();
    rep.wr_min = std::numeric_limits<double>::infinity();
    rep.wr_excess = -std::numeric_limits<double>::infinity();
    rep.wrr_excess = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        const double r = prof.r[i];
        if (!(r > K0) || !(r < r_end - 1.0)) continue;
        any = true;
        const double e1 = (16.0 / p.S) * std::exp(-4.0 * r / p.S);
        const double e2 = (64.0 / (p.S * p.S)) * std::exp(-4.0 * r / p.S);
        rep.wr_min = std::min(rep.wr_min, wr[i]);
        rep.wr_excess = std::max(rep.wr_excess, wr[i] - e1);
        rep.wrr_excess = std::max(rep.wrr_excess, std::abs(wrr[i]) - e2);
    }
    if (!any) throw TruncationTooSmallError("decay check window (K0, K-1) holds no grid nodes");
    rep.wr_envelope_ok = rep.wr_min >= -rep.tol && rep.wr_excess <= rep.tol;
    rep.wrr_envelope_ok = rep.wrr_excess <= rep.tol;

    rep.window_lo = std::max(2.0 * h, 2.0 * prof.r.front());
    rep.window_hi = fit_hi;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        const double r = prof.r[i];
        if (r < rep.window_lo || r > rep.window_hi) continue;
        if (!(prof.w[i] < 0.0)) continue;  // log of |w| needs w strictly negative
        xs.push_back(std::log(r));
        ys.push_back(std::log(-prof.w[i]));
    }
    rep.near_slope =
        xs.size() >= 3 ? ls_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::vector<double> solve_forced(const PhysicalParams& p, const std::function<double(double)>& G,
                                 double eps, double K, double h, double tol) {
    const int n = static_cast<int>(std::lround((K - eps) / h));
    if (n < 3) throw ValidationError("solve_forced: fewer than 3 cells");
    std::vector<double> r(n + 1), Gv(n + 1), qv(n + 1), w(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        r[i] = eps + i * h;
        Gv[i] = G(r[i]);
        qv[i] = metric_weight_q(p, r[i]);
    }
    const int m = n - 1;
    std::vector<double> F(m), a(m), b(m), c(m), rhs(m), delta(m);
    // straight Newton; smooth forcing keeps the iterates in the basin
    for (int it = 0; it < 60; ++it) {
        double res = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double lap = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
            F[i - 1] = lap - qv[i] * std::expm1(w[i]) - Gv[i];
            res = std::max(res, std::abs(F[i - 1]));
        }
        const double floor_now =
            std::max(tol, 4.0 * std::max(1.0, max_abs(w)) * DBL_EPSILON / (h * h));
        if (res < floor_now) break;
        for (int i = 0; i < m; ++i) {
            a[i] = 1.0 / (h * h);
            c[i] = 1.0 / (h * h);
            b[i] = -2.0 / (h * h) - qv[i + 1] * std::exp(w[i + 1]);
            rhs[i] = -F[i];
        }
        thomas_solve(a, b, c, rhs, delta);
        for (int i = 0; i < m; ++i) w[i + 1] += delta[i];
    }
    return w;
}

std::vector<double> shoot_profile(const PhysicalParams& p, const std::function<double(double)>& G,
                                  double eps, double K, double h, double slope0) {
    const int nst = static_cast<int>(std::lround((K - eps) / h));
    if (nst < 1) throw ValidationError("shoot_profile: empty integration range");
    auto rhs = [&](double r, double y0, double y1, double& d0, double& d1) {
        const double wc = std::min(y0, 50.0);  // clip so blown-up shots stay finite
        d0 = y1;
        d1 = metric_weight_q(p, r) * std::expm1(wc) + G(r);
    };
    std::vector<double> prof(nst + 1);
    prof[0] = 0.0;
    double y0 = 0.0, y1 = slope0, r = eps;
    for (int i = 0; i < nst; ++i) {
        double k10, k11, k20, k21, k30, k31, k40, k41;
        rhs(r, y0, y1, k10, k11);
        rhs(r + h / 2, y0 + h / 2 * k10, y1 + h / 2 * k11, k20, k21);
        rhs(r + h / 2, y0 + h / 2 * k20, y1 + h / 2 * k21, k30, k31);
        rhs(r + h, y0 + h * k30, y1 + h * k31, k40, k41);
        y0 += h / 6 * (k10 + 2 * k20 + 2 * k30 + k40);
        y1 += h / 6 * (k11 + 2 * k21 + 2 * k31 + k41);
        r += h;
        prof[i + 1] = y0;
    }
    return prof;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("ls_slope: need 2+ points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw ValidationError("ls_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

}  // namespace hcv
