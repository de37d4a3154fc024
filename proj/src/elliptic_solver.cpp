#include "hcv/elliptic_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "hcv/errors.hpp"
#include "hcv/geometry.hpp"

namespace hcv {

namespace {

constexpr double kBracketTol = 1e-8;

// run fn(lo, hi) over row ranges [1, Nr]; serial when threads == 1.  The
// per-row outputs are disjoint, so the split never changes results.
template <typename Fn>
void over_rows(int Nr, int threads, Fn&& fn) {
    if (threads <= 1 || Nr < 2 * threads) {
        fn(1, Nr + 1);
        return;
    }
    std::vector<std::thread> pool;
    const int span = (Nr + threads - 1) / threads;
    for (int c = 0; c < threads; ++c) {
        const int lo = 1 + c * span;
        const int hi = std::min(Nr + 1, lo + span);
        if (lo >= hi) break;
        pool.emplace_back([=, &fn] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// the solver works on the unknown rows i = 1..Nr packed row-major
struct Workspace {
    const StripGrid* g = nullptr;
    int Nr = 0, Nt = 0;
    double hr2 = 0.0, ht2 = 0.0;
    std::vector<double> q, E0, gsrc;  // per unknown; mirror row pre-halved via scalev
    std::vector<double> scalev;
    std::vector<double> row_partial;  // one slot per unknown row, for reductions

    std::size_t n() const { return std::size_t(Nr) * Nt; }
    std::size_t at(int i, int k) const {
        return std::size_t(i - 1) * Nt + std::size_t(((k % Nt) + Nt) % Nt);
    }
};

// F(v) = L v - scalev*(q*(E0*e^v - 1) + g), the row-Nr equation half-scaled
void nonlinear_residual(const Workspace& w, const std::vector<double>& v, int threads,
                        std::vector<double>& F) {
    over_rows(w.Nr, threads, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            for (int k = 0; k < w.Nt; ++k) {
                const std::size_t me = w.at(i, k);
                double lap;
                if (i < w.Nr) {
                    lap = (v[w.at(i, k + 1)] - 2.0 * v[me] + v[w.at(i, k - 1)]) / w.ht2;
                    double rpart = -2.0 * v[me] + v[w.at(i + 1, k)];
                    if (i > 1) rpart += v[w.at(i - 1, k)];
                    lap += rpart / w.hr2;
                } else {
                    lap = (v[w.at(i, k + 1)] - 2.0 * v[me] + v[w.at(i, k - 1)]) / (2.0 * w.ht2) +
                          (v[w.at(i - 1, k)] - v[me]) / w.hr2;
                }
                F[me] = lap - w.scalev[me] *
                                  (w.q[me] * (w.E0[me] * std::exp(v[me]) - 1.0) + w.gsrc[me]);
            }
        }
    });
}

// y = (-J) x = (-L + diag(d)) x with d = scalev*q*E0*e^v >= 0; SPD
void apply_negJ(const Workspace& w, const std::vector<double>& d, const std::vector<double>& x,
                int threads, std::vector<double>& y) {
    over_rows(w.Nr, threads, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            for (int k = 0; k < w.Nt; ++k) {
                const std::size_t me = w.at(i, k);
                double lap;
                if (i < w.Nr) {
                    lap = (x[w.at(i, k + 1)] - 2.0 * x[me] + x[w.at(i, k - 1)]) / w.ht2;
                    double rpart = -2.0 * x[me] + x[w.at(i + 1, k)];
                    if (i > 1) rpart += x[w.at(i - 1, k)];
                    lap += rpart / w.hr2;
                } else {
                    lap = (x[w.at(i, k + 1)] - 2.0 * x[me] + x[w.at(i, k - 1)]) / (2.0 * w.ht2) +
                          (x[w.at(i - 1, k)] - x[me]) / w.hr2;
                }
                y[me] = -lap + d[me] * x[me];
            }
        }
    });
}

// deterministic dot: pairwise within each row, pairwise across rows; the
// value is independent of the thread split
double det_dot(Workspace& w, const std::vector<double>& a, const std::vector<double>& b,
               int threads) {
    over_rows(w.Nr, threads, [&](int lo, int hi) {
        std::vector<double> buf(w.Nt);
        for (int i = lo; i < hi; ++i) {
            const std::size_t base = std::size_t(i - 1) * w.Nt;
            for (int k = 0; k < w.Nt; ++k) buf[k] = a[base + k] * b[base + k];
            w.row_partial[i - 1] = pairwise_sum(buf);
        }
    });
    return pairwise_sum(w.row_partial);
}

double max_norm(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// preconditioned CG for (-J) dv = b; Jacobi preconditioner
long cg_solve(Workspace& w, const std::vector<double>& d, const std::vector<double>& b,
              const SolverConfig& cfg, std::vector<double>& x) {
    const std::size_t n = w.n();
    std::vector<double> r(b), z(n), p(n), Ap(n), M(n);
    std::fill(x.begin(), x.end(), 0.0);
    over_rows(w.Nr, cfg.threads, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int k = 0; k < w.Nt; ++k) {
                const std::size_t me = w.at(i, k);
                M[me] = (i < w.Nr ? 2.0 / w.ht2 + 2.0 / w.hr2 : 1.0 / w.ht2 + 1.0 / w.hr2) + d[me];
            }
    });
    const double b2 = det_dot(w, b, b, cfg.threads);
    if (b2 == 0.0) return 0;
    const double stop2 = cfg.cg_rtol * cfg.cg_rtol * b2;
    for (std::size_t j = 0; j < n; ++j) z[j] = r[j] / M[j];
    p = z;
    double rz = det_dot(w, r, z, cfg.threads);
    double r2 = det_dot(w, r, r, cfg.threads);
    const double r2_first = r2;
    long it = 0;
    while (r2 > stop2) {
        if (it >= cfg.max_cg_iters) {
            std::ostringstream os;
            os << "CG stagnated: " << it << " iterations, |r|/|b| went "
               << std::sqrt(r2_first / b2) << " -> " << std::sqrt(r2 / b2) << " (target "
               << cfg.cg_rtol << ")";
            throw LinearSolverError("CG iteration budget exhausted", os.str());
        }
        apply_negJ(w, d, p, cfg.threads, Ap);
        const double pAp = det_dot(w, p, Ap, cfg.threads);
        if (!(pAp > 0.0))
            throw LinearSolverError("CG lost positive definiteness (p^T A p <= 0)", "");
        const double alpha = rz / pAp;
        over_rows(w.Nr, cfg.threads, [&](int lo, int hi) {
            const std::size_t a0 = std::size_t(lo - 1) * w.Nt, a1 = std::size_t(hi - 1) * w.Nt;
            for (std::size_t j = a0; j < a1; ++j) {
                x[j] += alpha * p[j];
                r[j] -= alpha * Ap[j];
                z[j] = r[j] / M[j];
            }
        });
        const double rz_next = det_dot(w, r, z, cfg.threads);
        r2 = det_dot(w, r, r, cfg.threads);
        const double beta = rz_next / rz;
        rz = rz_next;
        over_rows(w.Nr, cfg.threads, [&](int lo, int hi) {
            const std::size_t a0 = std::size_t(lo - 1) * w.Nt, a1 = std::size_t(hi - 1) * w.Nt;
            for (std::size_t j = a0; j < a1; ++j) p[j] = z[j] + beta * p[j];
        });
        ++it;
    }
    return it;
}

Workspace build_workspace(const PhysicalParams& p, const StripGrid& grid) {
    Workspace w;
    w.g = &grid;
    w.Nr = grid.Nr;
    w.Nt = grid.Nt;
    w.hr2 = grid.hr * grid.hr;
    w.ht2 = grid.ht * grid.ht;
    const std::size_t n = w.n();
    w.q.resize(n);
    w.E0.resize(n);
    w.gsrc.resize(n);
    w.scalev.resize(n);
    w.row_partial.assign(w.Nr, 0.0);
    for (int i = 1; i <= w.Nr; ++i) {
        const double qv = metric_weight_q(p, grid.r(i));
        for (int k = 0; k < w.Nt; ++k) {
            const std::size_t me = w.at(i, k);
            w.q[me] = qv;
            w.scalev[me] = (i == w.Nr) ? 0.5 : 1.0;
        }
    }
    return w;
}

Workspace build_workspace(const SourceData& src, const StripGrid& grid) {
    Workspace w = build_workspace(src.params(), grid);
    for (int i = 1; i <= w.Nr; ++i)
        for (int k = 0; k < w.Nt; ++k) {
            const std::size_t me = w.at(i, k);
            w.E0[me] = src.eval_expu0(grid.r(i), grid.t(k));
            w.gsrc[me] = src.eval_g(grid.r(i), grid.t(k));
        }
    return w;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol > 0.0) || !(cg_rtol > 0.0))
        throw ValidationError("SolverConfig: tolerances must be positive");
    if (max_newton < 1 || max_halvings < 1 || max_cg_iters < 1)
        throw ValidationError("SolverConfig: iteration caps must be >= 1");
    if (threads < 1) throw ValidationError("SolverConfig: threads must be >= 1");
}

ScalarField residual(const ScalarField& v, const SourceData& src, const StripGrid& grid) {
    if (!(v.grid == grid)) throw ValidationError("residual: field lives on a different grid");
    v.require_finite("residual input v");
    Workspace w = build_workspace(src, grid);
    std::vector<double> vu(w.n()), F(w.n());
    for (int i = 1; i <= w.Nr; ++i)
        for (int k = 0; k < w.Nt; ++k) vu[w.at(i, k)] = v.at(i, k);
    nonlinear_residual(w, vu, 1, F);
    ScalarField out(grid);
    for (int i = 1; i <= w.Nr; ++i)
        for (int k = 0; k < w.Nt; ++k)
            // report the mirror row unscaled (the assembled system halves it
            // only to stay symmetric)
            out.at(i, k) = F[w.at(i, k)] * (i == w.Nr ? 2.0 : 1.0);
    return out;
}

namespace {

std::pair<ScalarField, SolveReport> solve_core(Workspace& w, const ScalarField& v0,
                                               const StripGrid& grid, const SolverConfig& cfg,
                                               const Bracket* bracket) {
    const auto t_start = std::chrono::steady_clock::now();
    cfg.validate();
    if (!(v0.grid == grid)) throw ValidationError("solve: initial guess on a different grid");
    v0.require_finite("initial guess");
    if (bracket) {
        if (!(bracket->lower.grid == grid) || !(bracket->upper.grid == grid))
            throw ValidationError("solve: bracket fields on a different grid");
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double lo = bracket->lower.a[j], hi = bracket->upper.a[j];
            if (lo > hi) throw ValidationError("solve: bracket has lower > upper");
            if (v0.a[j] < lo - kBracketTol || v0.a[j] > hi + kBracketTol)
                throw ValidationError("solve: initial guess escapes the bracket");
        }
    }

    const std::size_t n = w.n();
    std::vector<double> v(n), F(n), Ft(n), d(n), dv(n), vt(n);
    for (int i = 1; i <= w.Nr; ++i)
        for (int k = 0; k < w.Nt; ++k) v[w.at(i, k)] = v0.at(i, k);

    auto clamp_to_bracket = [&](std::vector<double>& x) {
        if (!bracket || !cfg.project_bracket) return;
        for (int i = 1; i <= w.Nr; ++i)
            for (int k = 0; k < w.Nt; ++k) {
                double& xv = x[w.at(i, k)];
                xv = std::min(std::max(xv, bracket->lower.at(i, k)), bracket->upper.at(i, k));
            }
    };

    SolveReport rep;
    nonlinear_residual(w, v, cfg.threads, F);
    double res = max_norm(F);
    rep.iterations = 1;
    for (int it = 0; it < cfg.max_newton; ++it) {
        if (res < cfg.tol) {
            rep.converged = true;
            break;
        }
        for (std::size_t j = 0; j < n; ++j)
            d[j] = w.scalev[j] * w.q[j] * w.E0[j] * std::exp(v[j]);
        // J dv = -F is (-J) dv = F, and -J is SPD
        rep.cg_iterations += cg_solve(w, d, F, cfg, dv);
        double lam = 1.0;
        double res_t = res;
        for (int half = 0; half < cfg.max_halvings; ++half) {
            for (std::size_t j = 0; j < n; ++j) vt[j] = v[j] + lam * dv[j];
            clamp_to_bracket(vt);
            nonlinear_residual(w, vt, cfg.threads, Ft);
            res_t = max_norm(Ft);
            if (res_t < res) break;
            lam *= 0.5;
        }
        v.swap(vt);
        F.swap(Ft);
        res = res_t;
        ++rep.iterations;
        if (!std::isfinite(res))
            throw IterativeFailureError("Newton residual became non-finite", res);
    }
    rep.final_residual = res;
    if (!rep.converged)
        throw IterativeFailureError("Newton failed to converge within its iteration budget", res);

    ScalarField vout(grid);
    for (int i = 1; i <= w.Nr; ++i)
        for (int k = 0; k < w.Nt; ++k) vout.at(i, k) = v[w.at(i, k)];
    if (bracket) {
        for (std::size_t j = 0; j < grid.nodes(); ++j)
            if (vout.a[j] < bracket->lower.a[j] - kBracketTol ||
                vout.a[j] > bracket->upper.a[j] + kBracketTol)
                ++rep.bracket_violations;
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(vout), rep};
}

}  // namespace

std::pair<ScalarField, SolveReport> solve(const ScalarField& v0, const SourceData& src,
                                          const StripGrid& grid, const SolverConfig& cfg,
                                          const Bracket* bracket) {
    Workspace w = build_workspace(src, grid);
    return solve_core(w, v0, grid, cfg, bracket);
}

std::pair<ScalarField, SolveReport> solve_fields(const ScalarField& v0, const ScalarField& E0,
                                                 const ScalarField& gsrc,
                                                 const PhysicalParams& p, const StripGrid& grid,
                                                 const SolverConfig& cfg) {
    if (!(E0.grid == grid) || !(gsrc.grid == grid))
        throw ValidationError("solve_fields: coefficient fields on a different grid");
    E0.require_finite("E0 field");
    gsrc.require_finite("g field");
    Workspace w = build_workspace(p, grid);
    for (int i = 1; i <= w.Nr; ++i)
        for (int k = 0; k < w.Nt; ++k) {
            w.E0[w.at(i, k)] = E0.at(i, k);
            w.gsrc[w.at(i, k)] = gsrc.at(i, k);
        }
    return solve_core(w, v0, grid, cfg, nullptr);
}

ScalarField lift_profile(const std::vector<double>& pr, const std::vector<double>& pw,
                         const StripGrid& grid) {
    if (pr.size() != pw.size() || pr.size() < 2)
        throw ValidationError("lift_profile: malformed radial profile");
    for (std::size_t j = 1; j < pr.size(); ++j)
        if (!(pr[j] > pr[j - 1]))
            throw ValidationError("lift_profile: radial nodes must increase");
    ScalarField out(grid);
    for (int i = 0; i <= grid.Nr; ++i) {
        const double r = grid.r(i);
        double val;
        if (r < pr.front()) {
            val = (i == 0) ? 0.0 : -std::numeric_limits<double>::infinity();
        } else if (r >= pr.back()) {
            val = pw.back();
        } else {
            const auto hi = std::upper_bound(pr.begin(), pr.end(), r);
            const std::size_t j = std::size_t(hi - pr.begin());
            const double s = (r - pr[j - 1]) / (pr[j] - pr[j - 1]);
            val = (1.0 - s) * pw[j - 1] + s * pw[j];
        }
        for (int k = 0; k < grid.Nt; ++k) out.at(i, k) = val;
    }
    return out;
}

ScalarField upper_barrier(const SourceData& src, const StripGrid& grid) {
    ScalarField out(grid);
    for (int i = 0; i <= grid.Nr; ++i)
        for (int k = 0; k < grid.Nt; ++k) out.at(i, k) = -src.eval_u0(grid.r(i), grid.t(k));
    return out;
}

}  // namespace hcv
