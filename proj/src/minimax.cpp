#include "polyel/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "descent.hpp"
#include "polyel/weber.hpp"

namespace polyel {

namespace {

/// Workspace for the softmax-of-smoothed-phi objective.
struct DirectObjective {
    const Instance& inst;
    Vec v, gn, gphi;
    Vec phis;

    explicit DirectObjective(const Instance& i)
        : inst(i), v(i.dim()), gn(i.dim()), gphi(i.dim()), phis(i.n()) {}

    double operator()(Span x, double mu, Vec& grad) {
        const std::size_t n = inst.n(), k = inst.k(), d = inst.dim();
        const PointSet& A = inst.demand();
        const PointSet& U = inst.foci();
        const Vec& w = inst.foci_weights();

        std::fill(grad.begin(), grad.end(), 0.0);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t c = 0; c < d; ++c) v[c] = A(a, c) - U(j, c) - x[c];
                s += w[j] * inst.norm().smoothed(v, mu, nullptr);
            }
            phis[a] = s;
            mx = std::max(mx, s);
        }
        double z = 0.0;
        for (std::size_t a = 0; a < n; ++a) z += std::exp((phis[a] - mx) / mu);
        // grad = sum_a softw_a * grad phi_mu(x; a); phi gradients need a
        // second pass only over the demand points that carry weight.
        for (std::size_t a = 0; a < n; ++a) {
            const double sw = std::exp((phis[a] - mx) / mu) / z;
            if (sw < 1e-18) continue;
            std::fill(gphi.begin(), gphi.end(), 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t c = 0; c < d; ++c) v[c] = A(a, c) - U(j, c) - x[c];
                inst.norm().smoothed(v, mu, gn.data());
                axpy(-w[j], gn, gphi);
            }
            axpy(sw, gphi, grad);
        }
        return mx + mu * std::log(z);
    }
};

double smoothing_slack(const Instance& inst) {
    return inst.norm().smoothing_constant(inst.dim()) +
           std::log(static_cast<double>(std::max<std::size_t>(inst.n(), 2))) + 1.0;
}

}  // namespace

Solution solve_direct(const Instance& inst, const SolverConfig& cfg) {
    if (!(cfg.tol_r > 0.0)) throw std::invalid_argument("solver: tol_r must be positive");
    if (cfg.mu0 > 0.0 && cfg.mu_min > 0.0 && !(cfg.mu_min < cfg.mu0))
        throw std::invalid_argument("solver: mu_min must be below mu0");
    const std::size_t d = inst.dim();
    const double diam = inst.data_diameter();

    Vec x0(d, 0.0);
    if (cfg.warm_start) {
        x0 = *cfg.warm_start;
    } else {
        for (std::size_t i = 0; i < inst.n(); ++i) axpy(1.0 / inst.n(), inst.demand().row(i), x0);
        const Vec um = inst.foci_mean();
        for (std::size_t c = 0; c < d; ++c) x0[c] -= um[c];
    }

    double mu0 = cfg.mu0 > 0.0 ? cfg.mu0 : 0.1 * diam;
    const double slack = smoothing_slack(inst);
    const double mu_floor = cfg.mu_min > 0.0 ? cfg.mu_min : std::max(1e-14 * diam, 1e-300);
    if (cfg.warm_start && cfg.mu0 <= 0.0) mu0 = 1e-3 * diam;
    mu0 = std::max(mu0, mu_floor);

    DirectObjective obj(inst);

    detail::ContinuationOptions copt;
    copt.mu0 = mu0;
    copt.mu_min = mu_floor;
    copt.max_stages = cfg.max_outer;
    copt.stage.max_iter = cfg.max_inner;
    copt.stage.gtol = 1e-11;
    copt.stage.armijo_c = cfg.armijo_c;
    copt.stage.armijo_shrink = cfg.armijo_shrink;
    if (cfg.mu_min <= 0.0) {
        // Halve until the smoothing error bound drops below the relative
        // radius tolerance at the current objective level.
        copt.stop_mu = [&, slack](double fcur) {
            return cfg.tol_r * std::max(fcur, 1e-9 * diam) / slack;
        };
    }
    if (std::isfinite(cfg.prune_above)) {
        copt.abort_check = [&, slack](double fval, double mu) {
            return fval - slack * mu > cfg.prune_above;
        };
    }

    detail::ContinuationResult res = detail::continuation_minimize(obj, std::move(x0), copt);

    Solution sol;
    sol.x = std::move(res.x);
    auto [r, arg] = objective(inst, sol.x);
    (void)arg;
    sol.r = r;
    sol.support = support_set(inst, sol.x, r);
    sol.iterations = res.iterations;
    sol.inner_solves = res.stages;
    sol.converged = res.converged && !res.aborted;
    sol.residual = slack * res.mu_final + std::max(0.0, res.f_smoothed - r);
    return sol;
}

Vec project_simplex(const Vec& v) {
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
    Vec u(v);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t j = 0; j < n; ++j) {
        cum += u[j];
        const double t = (cum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) {
            rho = j;
            theta = t;
        }
    }
    (void)rho;
    Vec out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = std::max(v[j] - theta, 0.0);
    return out;
}

namespace {

/// Difference points {a - u} for a demand subset, row (a, j) = a - u_j.
PointSet difference_points(const Instance& inst, const std::vector<std::size_t>& demand_idx) {
    const std::size_t d = inst.dim(), k = inst.k();
    PointSet pts(demand_idx.size() * k, d);
    for (std::size_t ai = 0; ai < demand_idx.size(); ++ai) {
        Span a = inst.demand().row(demand_idx[ai]);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t c = 0; c < d; ++c) pts(ai * k + j, c) = a[c] - inst.foci()(j, c);
    }
    return pts;
}

void fill_weber_weights(const Vec& alpha, const Vec& w, Vec& out) {
    const std::size_t k = w.size();
    out.resize(alpha.size() * k);
    for (std::size_t a = 0; a < alpha.size(); ++a)
        for (std::size_t j = 0; j < k; ++j) out[a * k + j] = alpha[a] * w[j];
}

void eval_fa(const Instance& inst, Span x, Vec& fa) {
    fa.resize(inst.n());
    for (std::size_t a = 0; a < inst.n(); ++a) fa[a] = phi(inst, x, a);
}

/// grad_x phi(x; a) (a subgradient selection for non-smooth norms).
Vec phi_gradient(const Instance& inst, Span x, std::size_t a) {
    const std::size_t d = inst.dim();
    Vec g(d, 0.0), v(d);
    for (std::size_t j = 0; j < inst.k(); ++j) {
        for (std::size_t c = 0; c < d; ++c) v[c] = inst.demand()(a, c) - inst.foci()(j, c) - x[c];
        const Vec gn = inst.norm().subgradient(v);
        axpy(-inst.foci_weights()[j], gn, g);
    }
    return g;
}

/// Gaussian elimination with partial pivoting; A is n x n row-major.
bool gauss_solve(std::vector<double> A, Vec b, Vec& out) {
    const std::size_t n = b.size();
    std::vector<std::size_t> piv(n);
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[best * n + col])) best = r;
        if (std::abs(A[best * n + col]) < 1e-14) return false;
        if (best != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[best * n + c]);
            std::swap(b[col], b[best]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i * n + c] * out[c];
        out[i] = s / A[i * n + i];
    }
    return true;
}

/// Multipliers on the active face from stationarity: alpha >= 0 on the
/// simplex with sum_a alpha_a grad f_a(x*) ~ 0, via equality-constrained
/// least squares with negative entries clipped and re-solved.
bool kkt_multipliers(const std::vector<Vec>& grads, Vec& alpha) {
    const std::size_t m = grads.size();
    if (m == 0) return false;
    if (m == 1) {
        alpha = {1.0};
        return true;
    }
    const std::size_t d = grads[0].size();
    std::vector<bool> keep(m, true);
    for (std::size_t pass = 0; pass < m; ++pass) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < m; ++i)
            if (keep[i]) idx.push_back(i);
        const std::size_t q = idx.size();
        if (q == 0) return false;
        // minimize ||G a||^2 s.t. 1'a = 1  ->  [2 G'G, 1; 1', 0] [a; nu] = [0; 1]
        std::vector<double> M((q + 1) * (q + 1), 0.0);
        Vec rhs(q + 1, 0.0);
        rhs[q] = 1.0;
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
                double s = 0.0;
                for (std::size_t c = 0; c < d; ++c) s += grads[idx[i]][c] * grads[idx[j]][c];
                M[i * (q + 1) + j] = 2.0 * s;
            }
            M[i * (q + 1) + i] += 1e-12;  // regularize collinear gradients
            M[i * (q + 1) + q] = 1.0;
            M[q * (q + 1) + i] = 1.0;
        }
        Vec sol;
        if (!gauss_solve(M, rhs, sol)) return false;
        bool ok = true;
        double minv = 0.0;
        std::size_t argmin = m;
        for (std::size_t i = 0; i < q; ++i) {
            if (sol[i] < minv) {
                minv = sol[i];
                argmin = idx[i];
                ok = false;
            }
        }
        if (ok) {
            alpha.assign(m, 0.0);
            double tot = 0.0;
            for (std::size_t i = 0; i < q; ++i) {
                alpha[idx[i]] = std::max(sol[i], 0.0);
                tot += alpha[idx[i]];
            }
            if (tot <= 0.0) return false;
            for (double& a : alpha) a /= tot;
            return true;
        }
        keep[argmin] = false;
    }
    return false;
}

}  // namespace

std::pair<Solution, DualCertificate> solve_lagrangean(const Instance& inst, const SolverConfig& cfg) {
    const std::size_t n = inst.n();
    const double diam = inst.data_diameter();

    DualCertificate cert;
    Solution sol;

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const PointSet diffs = difference_points(inst, all);

    if (n == 1) {
        WeberOptions wopt;
        wopt.tol = std::max(1e-10, cfg.tol_r * diam * 1e-2);
        WeberResult wr = weber_solve(diffs, inst.foci_weights(), inst.norm(), wopt);
        sol.x = wr.x;
        sol.r = wr.value;
        sol.support = {0};
        sol.converged = wr.converged;
        sol.iterations = 1;
        sol.inner_solves = 1;
        cert.alpha = {1.0};
        cert.dual_value = wr.value - wopt.tol;
        cert.recorded_values = {cert.dual_value};
        return {sol, cert};
    }

    Vec alpha(n, 1.0 / static_cast<double>(n));
    Vec wbuf, fa;
    const double eta0 = 1.0 / diam;

    Vec best_alpha = alpha;
    double best_dual = -std::numeric_limits<double>::infinity();
    double best_primal = std::numeric_limits<double>::infinity();
    Vec best_x;
    Vec xwarm;
    std::size_t weber_count = 0;

    double gap_abs = 0.1 * diam;
    auto inner_tol = [&] { return std::max(1e-9, gap_abs / 100.0); };

    auto evaluate = [&](const Vec& a_cur, const PointSet& pts, const Vec* warm, double tol,
                        Vec& x_out) -> double {
        fill_weber_weights(a_cur, inst.foci_weights(), wbuf);
        WeberOptions wopt;
        wopt.tol = tol;
        wopt.warm_start = warm;
        WeberResult wr = weber_solve(pts, wbuf, inst.norm(), wopt);
        ++weber_count;
        x_out = std::move(wr.x);
        return wr.value;
    };

    // Phase 1: plain projected ascent with eta_t = eta0 / sqrt(t) over the
    // full simplex. This localizes the active demand points.
    const std::size_t phase1 = std::min<std::size_t>(cfg.dual_max_outer, 60 + 2 * inst.dim());
    for (std::size_t t = 1; t <= phase1; ++t) {
        const double tol = inner_tol();
        Vec xhat;
        const double dual_raw = evaluate(alpha, diffs, xwarm.empty() ? nullptr : &xwarm, tol, xhat);
        xwarm = xhat;
        eval_fa(inst, xhat, fa);
        const double primal = *std::max_element(fa.begin(), fa.end());
        const double dual_cert = dual_raw - tol;
        cert.recorded_values.push_back(dual_cert);
        if (dual_cert > best_dual) {
            best_dual = dual_cert;
            best_alpha = alpha;
            best_x = xhat;
            best_primal = primal;
        }
        gap_abs = std::max(1e-12, best_primal - best_dual);
        if (gap_abs <= cfg.gap_tol * std::max(best_primal, 1e-12)) break;

        const double eta = eta0 / std::sqrt(static_cast<double>(t));
        Vec step(alpha);
        axpy(eta, fa, step);
        alpha = project_simplex(step);
    }

    // Phase 2: close the gap on the near-active face. The face minimax is
    // solved directly, the optimal multipliers are recovered from the
    // stationarity system over the active points, and one tight Weber solve
    // certifies F(alpha). The certificate is valid for any alpha (weak
    // duality); near-optimal alpha makes it tight because F is flat to first
    // order across its maximizing face.
    if (gap_abs > cfg.gap_tol * std::max(best_primal, 1e-12)) {
        eval_fa(inst, best_x, fa);
        std::vector<std::size_t> face;
        {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (fa[a] != fa[b]) return fa[a] > fa[b];
                return a < b;
            });
            const std::size_t cap = std::min<std::size_t>(n, 2 * (inst.dim() + 2));
            face.assign(order.begin(), order.begin() + cap);
            for (std::size_t a = 0; a < n; ++a)
                if (best_alpha[a] > 1e-3 && std::find(face.begin(), face.end(), a) == face.end())
                    face.push_back(a);
            std::sort(face.begin(), face.end());
        }

        SolverConfig face_cfg = cfg;
        face_cfg.tol_r = std::min(cfg.tol_r, 0.01 * cfg.gap_tol);
        face_cfg.warm_start = nullptr;

        for (std::size_t expand = 0; expand < 40 && face.size() <= n; ++expand) {
            const std::size_t m = face.size();
            const PointSet fdiffs = difference_points(inst, face);

            PointSet fdemand(0, inst.dim());
            for (std::size_t i : face) fdemand.push_back(inst.demand().row(i));
            Instance face_inst(fdemand, inst.foci(), inst.foci_weights(), inst.norm());
            SolverConfig fc = face_cfg;
            if (!best_x.empty()) fc.warm_start = &best_x;
            const Solution fsol = solve_direct(face_inst, fc);

            // Multipliers over the face solution's active points.
            std::vector<std::size_t> act;
            for (std::size_t i = 0; i < m; ++i)
                if (phi(face_inst, fsol.x, i) >= fsol.r * (1.0 - 1e-7)) act.push_back(i);
            if (act.empty()) act.push_back(0);
            std::vector<Vec> grads;
            grads.reserve(act.size());
            for (std::size_t i : act) grads.push_back(phi_gradient(face_inst, fsol.x, i));
            Vec beta(m, 0.0);
            Vec asub;
            if (kkt_multipliers(grads, asub)) {
                for (std::size_t i = 0; i < act.size(); ++i) beta[act[i]] = asub[i];
            } else {
                for (std::size_t i : act) beta[i] = 1.0 / static_cast<double>(act.size());
            }

            // Tight certify solve: the tolerance is quadratic in the target
            // because a value defect tol moves the minimizer ~ sqrt(2 tol diam).
            const double target = 0.25 * cfg.gap_tol * std::max(fsol.r, 1e-9);
            const double tol_final = std::max(1e-12, std::min(target * target / (2.0 * diam), target));
            Vec xfin;
            const double dual_raw = evaluate(beta, fdiffs, &fsol.x, tol_final, xfin);
            eval_fa(inst, xfin, fa);
            double primal = *std::max_element(fa.begin(), fa.end());
            // The face minimizer is an equally valid recovery of x*_alpha at
            // the optimal multipliers, and it is immune to flat-valley drift
            // of the inner Weber iterate; keep the better cover of the two.
            {
                Vec fa2;
                eval_fa(inst, fsol.x, fa2);
                const double primal2 = *std::max_element(fa2.begin(), fa2.end());
                if (primal2 < primal) {
                    primal = primal2;
                    xfin = fsol.x;
                    fa = std::move(fa2);
                }
            }
            const double dual_cert = dual_raw - tol_final;
            cert.recorded_values.push_back(dual_cert);
            if (dual_cert > best_dual) {
                best_dual = dual_cert;
                best_x = xfin;
                best_primal = primal;
                best_alpha.assign(n, 0.0);
                for (std::size_t i = 0; i < m; ++i) best_alpha[face[i]] = beta[i];
            } else if (primal < best_primal && dual_cert > best_dual - tol_final * 4.0) {
                best_x = xfin;
                best_primal = primal;
                best_alpha.assign(n, 0.0);
                for (std::size_t i = 0; i < m; ++i) best_alpha[face[i]] = beta[i];
            }
            gap_abs = std::max(1e-12, best_primal - best_dual);
            if (gap_abs <= cfg.gap_tol * std::max(best_primal, 1e-12)) break;

            // The face missed an active point: admit the worst violators.
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (fa[a] != fa[b]) return fa[a] > fa[b];
                return a < b;
            });
            bool grew = false;
            for (std::size_t oi = 0; oi < n && !grew; ++oi) {
                const std::size_t a = order[oi];
                if (fa[a] <= fsol.r * (1.0 + 1e-12)) break;
                if (std::find(face.begin(), face.end(), a) == face.end()) {
                    face.push_back(a);
                    grew = true;
                }
            }
            if (!grew) break;
            std::sort(face.begin(), face.end());
        }
    }

    sol.x = best_x;
    auto [r, argmax_a] = objective(inst, sol.x);
    (void)argmax_a;
    sol.r = r;
    sol.support = support_set(inst, sol.x, r);
    sol.iterations = cert.recorded_values.size();
    sol.inner_solves = weber_count;
    sol.converged = (best_primal - best_dual) <= cfg.gap_tol * std::max(best_primal, 1e-12);
    sol.residual = best_primal - best_dual;
    cert.alpha = best_alpha;
    cert.dual_value = best_dual;
    return {sol, cert};
}

}  // namespace polyel
