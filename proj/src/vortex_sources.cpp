#include "hcv/vortex_sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "hcv/strip_grid.hpp"

namespace hcv {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 24-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr int kGL = 24;
constexpr double kGLx[kGL] = {
    -9.95187219997021311e-01, -9.74728555971309474e-01, -9.38274552002732798e-01,
    -8.86415527004400960e-01, -8.20001985973902947e-01, -7.40124191578554358e-01,
    -6.48093651936975546e-01, -5.45421471388839563e-01, -4.33793507626045127e-01,
    -3.15042679696163397e-01, -1.91118867473616311e-01, -6.40568928626056300e-02,
    6.40568928626056300e-02,  1.91118867473616311e-01,  3.15042679696163397e-01,
    4.33793507626045127e-01,  5.45421471388839563e-01,  6.48093651936975546e-01,
    7.40124191578554358e-01,  8.20001985973902947e-01,  8.86415527004400960e-01,
    9.38274552002732798e-01,  9.74728555971309474e-01,  9.95187219997021311e-01};
constexpr double kGLw[kGL] = {
    1.23412297999870909e-02, 2.85313886289337432e-02, 4.42774388174195510e-02,
    5.92985849154367417e-02, 7.33464814110804109e-02, 8.61901615319532882e-02,
    9.76186521041140648e-02, 1.07444270115965607e-01, 1.15505668053725613e-01,
    1.21670472927803419e-01, 1.25837456346828303e-01, 1.27938195346752215e-01,
    1.27938195346752215e-01, 1.25837456346828303e-01, 1.21670472927803419e-01,
    1.15505668053725613e-01, 1.07444270115965607e-01, 9.76186521041140648e-02,
    8.61901615319532882e-02, 7.33464814110804109e-02, 5.92985849154367417e-02,
    4.42774388174195510e-02, 2.85313886289337432e-02, 1.23412297999870909e-02};

}  // namespace

void VortexConfig::validate(const PhysicalParams& p) const {
    p.validate();
    for (const auto& [rj, tj] : points) {
        if (!(rj > 0.0) || !std::isfinite(rj))
            throw ValidationError("VortexConfig: vortex radius must be > 0, got " + std::to_string(rj));
        if (!(tj >= 0.0) || !(tj < p.beta))
            throw ValidationError("VortexConfig: vortex t must lie in [0, beta), got " + std::to_string(tj));
    }
    const double tol = 1e-6 * p.beta;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double dr = points[i].first - points[j].first;
            const double dt = wrap_dt(points[i].second - points[j].second, p.beta);
            const double d = std::hypot(dr, dt);
            if (d > 0.0 && d < tol)
                throw ValidationError(
                    "VortexConfig: two distinct vortices closer than 1e-6*beta; "
                    "express multiplicity by exact repetition");
        }
}

void CutoffSpec::validate() const {
    if (!(0.0 < r_lo && r_lo < r1 && r1 <= r2 && r2 < r_hi))
        throw ValidationError("CutoffSpec: need 0 < r_lo < r1 <= r2 < r_hi");
    if (!(0.0 < bt1 && bt1 < bt2 && bt2 < 0.5))
        throw ValidationError("CutoffSpec: need 0 < bt1 < bt2 < 0.5 (t-window must avoid the seam)");
}

CutoffSpec CutoffSpec::defaults_for(const VortexConfig& cfg, const PhysicalParams& p) {
    CutoffSpec c;
    if (cfg.points.empty()) {
        c.r_lo = p.S / 8.0;
        c.r1 = p.S / 4.0;
        c.r2 = p.S;
        c.r_hi = 2.0 * p.S;
        return c;
    }
    double rmin = cfg.points[0].first, rmaxv = cfg.points[0].first;
    for (const auto& [rj, tj] : cfg.points) {
        rmin = std::min(rmin, rj);
        rmaxv = std::max(rmaxv, rj);
    }
    c.r_lo = rmin / 4.0;
    c.r1 = rmin / 2.0;
    c.r2 = 2.0 * rmaxv;
    c.r_hi = 4.0 * rmaxv;
    return c;
}

double smoothstep5(double x) { return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x); }
double smoothstep5_d1(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double smoothstep5_d2(double x) { return 60.0 * x * (1.0 - 3.0 * x + 2.0 * x * x); }

SourceData::SourceData(PhysicalParams params, VortexConfig config, CutoffSpec cutoff)
    : params_(params), config_(std::move(config)), cutoff_(cutoff) {
    params_.validate();
    cutoff_.validate();
    config_.validate(params_);
    for (const auto& [rj, tj] : config_.points)
        if (!(cutoff_.r1 <= rj && rj <= cutoff_.r2))
            throw ValidationError("SourceData: vortex at r=" + std::to_string(rj) +
                                  " outside the cutoff plateau [" + std::to_string(cutoff_.r1) +
                                  ", " + std::to_string(cutoff_.r2) + "]");
    BT1_ = cutoff_.bt1 * params_.beta;
    BT2_ = cutoff_.bt2 * params_.beta;
}

void SourceData::eta_radial(double r, double& a, double& a1, double& a2) const {
    const CutoffSpec& c = cutoff_;
    a = a1 = a2 = 0.0;
    if (r >= c.r_lo && r < c.r1) {
        const double w = c.r1 - c.r_lo, x = (r - c.r_lo) / w;
        a = smoothstep5(x);
        a1 = smoothstep5_d1(x) / w;
        a2 = smoothstep5_d2(x) / (w * w);
    } else if (r >= c.r1 && r <= c.r2) {
        a = 1.0;
    } else if (r > c.r2 && r <= c.r_hi) {
        const double w = c.r_hi - c.r2, x = (r - c.r2) / w;
        a = 1.0 - smoothstep5(x);
        a1 = -smoothstep5_d1(x) / w;
        a2 = -smoothstep5_d2(x) / (w * w);
    }
}

void SourceData::eta_temporal(double dt, double& b, double& b1, double& b2) const {
    const double ad = std::fabs(dt);
    b = b1 = b2 = 0.0;
    if (ad <= BT1_) {
        b = 1.0;
    } else if (ad < BT2_) {
        const double w = BT2_ - BT1_, x = (ad - BT1_) / w;
        const double sg = (dt >= 0.0) ? 1.0 : -1.0;
        b = 1.0 - smoothstep5(x);
        b1 = -smoothstep5_d1(x) / w * sg;
        b2 = -smoothstep5_d2(x) / (w * w);
    }
}

SourceData::Term SourceData::term_at(double rj, double tj, double r, double t) const {
    Term m;
    m.dr = r - rj;
    m.dt = wrap_dt(t - tj, params_.beta);
    m.d2 = m.dr * m.dr + m.dt * m.dt;
    double a, a1, a2, b, b1, b2;
    eta_radial(r, a, a1, a2);
    eta_temporal(m.dt, b, b1, b2);
    m.a = a;
    m.b = b;
    m.eta = a * b;
    m.deta_r = a1 * b;
    m.deta_t = a * b1;
    m.lap_eta = a2 * b + a * b2;
    return m;
}

double SourceData::eval_U0(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double s = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const double dr = r - rj, dt = wrap_dt(t - tj, params_.beta);
        const double d2 = dr * dr + dt * dt;
        if (d2 == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(d2) - std::log1p(d2);
    }
    return s;
}

double SourceData::eval_u0(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double s = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const Term m = term_at(rj, tj, r, t);
        if (m.eta == 0.0) continue;
        if (m.d2 == 0.0) return -std::numeric_limits<double>::infinity();
        s += m.eta * (std::log(m.d2) - std::log1p(m.d2));
    }
    return s;
}

double SourceData::eval_expu0(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double p = 1.0;
    for (const auto& [rj, tj] : config_.points) {
        const Term m = term_at(rj, tj, r, t);
        if (m.eta == 0.0) continue;
        p *= std::pow(m.d2 / (1.0 + m.d2), m.eta);
    }
    return p;
}

double SourceData::eval_g(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double tot = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const Term m = term_at(rj, tj, r, t);
        const double opd = 1.0 + m.d2;
        const double P = 4.0 / (opd * opd);
        if (m.d2 == 0.0) {
            // vortex node: the cutoff sits on its plateau, every eta
            // derivative is exactly 0 and only eta*P survives
            tot += m.eta * P;
            continue;
        }
        const double U0 = std::log(m.d2) - std::log1p(m.d2);
        const double U0r = 2.0 * m.dr / (m.d2 * opd);
        const double U0t = 2.0 * m.dt / (m.d2 * opd);
        tot += m.eta * P - 2.0 * (m.deta_r * U0r + m.deta_t * U0t) - U0 * m.lap_eta;
    }
    return tot;
}

std::pair<double, double> SourceData::grad_u0(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double gr = 0.0, gt = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const Term m = term_at(rj, tj, r, t);
        if (m.eta == 0.0 && m.deta_r == 0.0 && m.deta_t == 0.0) continue;
        const double opd = 1.0 + m.d2;
        const double U0 = std::log(m.d2) - std::log1p(m.d2);
        const double U0r = 2.0 * m.dr / (m.d2 * opd);
        const double U0t = 2.0 * m.dt / (m.d2 * opd);
        gr += m.deta_r * U0 + m.eta * U0r;
        gt += m.deta_t * U0 + m.eta * U0t;
    }
    return {gr, gt};
}

std::pair<double, double> SourceData::singular_split(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double s = 0.0, rest = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const double dr = r - rj, dt = wrap_dt(t - tj, params_.beta);
        const double d2 = dr * dr + dt * dt;
        s += std::log(d2);  // -inf at the node, by convention
        rest += -std::log1p(d2);
    }
    return {s, rest};
}

double SourceData::eval_rho0(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double s = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const Term m = term_at(rj, tj, r, t);
        // (eta-1) ln d^2 - eta ln(1+d^2); eta == 1 exactly on the plateau,
        // which contains every point where d^2 can vanish
        if (m.eta == 1.0)
            s += -std::log1p(m.d2);
        else
            s += (m.eta - 1.0) * std::log(m.d2) - m.eta * std::log1p(m.d2);
    }
    return s;
}

double SourceData::dist_product(double r, double t) const {
    t = wrap_t(t, params_.beta);
    double p = 1.0;
    for (const auto& [rj, tj] : config_.points) {
        const double dr = r - rj, dt = wrap_dt(t - tj, params_.beta);
        p *= std::sqrt(dr * dr + dt * dt);
    }
    return p;
}

std::pair<double, double> SourceData::dist_product_grad_s(double r, double t) const {
    t = wrap_t(t, params_.beta);
    const int n = config_.N();
    std::vector<double> dr(n), dt(n), d(n);
    for (int j = 0; j < n; ++j) {
        dr[j] = r - config_.points[j].first;
        dt[j] = wrap_dt(t - config_.points[j].second, params_.beta);
        d[j] = std::hypot(dr[j], dt[j]);
    }
    double gr = 0.0, gt = 0.0;
    for (int k = 0; k < n; ++k) {
        double rest = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != k) rest *= d[j];
        if (d[k] == 0.0) {
            // limit of 2 (x-p_k)/d_k * rest: unit direction times rest; the
            // direction is immaterial for |.|^2 consumers, fix it to e_r
            gr += 2.0 * rest;
        } else {
            gr += 2.0 * dr[k] / d[k] * rest;
            gt += 2.0 * dt[k] / d[k] * rest;
        }
    }
    return {gr, gt};
}

double SourceData::vortex_phase(double r, double t) const {
    t = wrap_t(t, params_.beta);
    const double c = 2.0 * kPi / params_.beta;
    if (c * r > 700.0)
        throw DomainError("vortex_phase: 2 pi r / beta too large, e^{2 pi r/beta} overflows");
    const std::complex<double> z(r, t);
    double th = 0.0;
    for (const auto& [rj, tj] : config_.points) {
        const std::complex<double> Ez = std::exp(c * z);
        const std::complex<double> Ep = std::exp(c * std::complex<double>(rj, tj));
        const std::complex<double> w = Ez - Ep;
        if (w == std::complex<double>(0.0, 0.0))
            throw SingularPointError("vortex_phase: evaluation at a vortex node");
        th += std::arg(w);
    }
    return th;
}

std::pair<double, double> SourceData::vortex_phase_grad(double r, double t) const {
    t = wrap_t(t, params_.beta);
    const double c = 2.0 * kPi / params_.beta;
    if (c * r > 700.0)
        throw DomainError("vortex_phase_grad: 2 pi r / beta too large");
    const std::complex<double> z(r, t);
    std::complex<double> fp(0.0, 0.0);
    for (const auto& [rj, tj] : config_.points) {
        const std::complex<double> Ez = std::exp(c * z);
        const std::complex<double> Ep = std::exp(c * std::complex<double>(rj, tj));
        const std::complex<double> w = Ez - Ep;
        if (w == std::complex<double>(0.0, 0.0))
            throw SingularPointError("vortex_phase_grad: evaluation at a vortex node");
        fp += c * Ez / w;
    }
    return {fp.imag(), fp.real()};  // (Theta_r, Theta_t)
}

double SourceData::g_integral(double r_upper) const {
    const double beta = params_.beta;
    std::set<double> rbs = {0.0, cutoff_.r_lo, cutoff_.r1, cutoff_.r2, cutoff_.r_hi, r_upper};
    for (const auto& [rj, tj] : config_.points) rbs.insert(rj);
    std::vector<double> rb(rbs.begin(), rbs.end());
    while (!rb.empty() && rb.back() > r_upper) rb.pop_back();

    std::set<double> tbs = {0.0, beta};
    for (const auto& [rj, tj] : config_.points)
        for (double off : {-BT2_, -BT1_, 0.0, BT1_, BT2_}) tbs.insert(wrap_t(tj + off, beta));
    std::vector<double> tb(tbs.begin(), tbs.end());

    std::vector<std::pair<double, double>> rpan, tpan;
    for (std::size_t i = 0; i + 1 < rb.size(); ++i)
        for (int k = 0; k < 8; ++k)
            rpan.emplace_back(rb[i] + (rb[i + 1] - rb[i]) * k / 8.0,
                              rb[i] + (rb[i + 1] - rb[i]) * (k + 1) / 8.0);
    for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
        if (tb[i + 1] - tb[i] < 1e-14) continue;
        for (int k = 0; k < 4; ++k)
            tpan.emplace_back(tb[i] + (tb[i + 1] - tb[i]) * k / 4.0,
                              tb[i] + (tb[i + 1] - tb[i]) * (k + 1) / 4.0);
    }

    std::vector<double> contributions;
    contributions.reserve(rpan.size() * tpan.size());
    for (const auto& [ra, rbnd] : rpan) {
        const double rm = 0.5 * (ra + rbnd), rh = 0.5 * (rbnd - ra);
        for (const auto& [ta, tbnd] : tpan) {
            const double tm = 0.5 * (ta + tbnd), th = 0.5 * (tbnd - ta);
            double acc = 0.0;
            for (int i = 0; i < kGL; ++i) {
                const double rr = rm + rh * kGLx[i];
                double inner = 0.0;
                for (int j = 0; j < kGL; ++j)
                    inner += kGLw[j] * eval_g(rr, tm + th * kGLx[j]);
                acc += kGLw[i] * inner;
            }
            contributions.push_back(rh * th * acc);
        }
    }
    return pairwise_sum(contributions);
}

}  // namespace hcv
