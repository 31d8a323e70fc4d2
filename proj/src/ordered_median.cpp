#include "polyel/ordered_median.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "descent.hpp"
#include "polyel/minimax.hpp"

namespace polyel {

OrderedSpec::OrderedSpec(Vec lambda) : lambda_(std::move(lambda)) {
    if (lambda_.empty()) throw std::invalid_argument("ordered spec: empty lambda");
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
        if (!(lambda_[i] >= 0.0)) throw std::invalid_argument("ordered spec: lambda must be nonnegative");
        if (i > 0 && lambda_[i] > lambda_[i - 1] + 1e-15)
            throw std::invalid_argument("ordered spec: lambda must be non-increasing");
    }
}

namespace {

/// Weighted distances c_j = w_j ||a - u_j - x|| and the permutation sorting
/// them non-increasing (ties by focus index).
void sorted_distances(const Instance& inst, Span x, std::size_t a_index, Vec& c,
                      std::vector<std::size_t>& order) {
    const std::size_t k = inst.k(), d = inst.dim();
    c.resize(k);
    Vec v(d);
    Span a = inst.demand().row(a_index);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t cdx = 0; cdx < d; ++cdx) v[cdx] = a[cdx] - inst.foci()(j, cdx) - x[cdx];
        c[j] = inst.foci_weights()[j] * inst.norm().eval(v);
    }
    order.resize(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (c[i] != c[j]) return c[i] > c[j];
        return i < j;
    });
}

void check_spec(const Instance& inst, const OrderedSpec& spec) {
    if (spec.size() != inst.k())
        throw std::invalid_argument("ordered median: lambda size must match the focus count");
}

}  // namespace

double om_value(const Instance& inst, const OrderedSpec& spec, Span x, std::size_t a_index) {
    check_spec(inst, spec);
    if (a_index >= inst.n()) throw std::out_of_range("om_value: demand index out of range");
    Vec c;
    std::vector<std::size_t> order;
    sorted_distances(inst, x, a_index, c, order);
    double s = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) s += spec.lambda()[i] * c[order[i]];
    return s;
}

Vec om_subgradient(const Instance& inst, const OrderedSpec& spec, Span x, std::size_t a_index) {
    check_spec(inst, spec);
    const std::size_t k = inst.k(), d = inst.dim();
    Vec c;
    std::vector<std::size_t> order;
    sorted_distances(inst, x, a_index, c, order);
    Vec g(d, 0.0), v(d);
    Span a = inst.demand().row(a_index);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = order[i];
        for (std::size_t cdx = 0; cdx < d; ++cdx) v[cdx] = a[cdx] - inst.foci()(j, cdx) - x[cdx];
        const Vec gn = inst.norm().subgradient(v);
        axpy(-spec.lambda()[i] * inst.foci_weights()[j], gn, g);
    }
    return g;
}

Solution solve_om(const Instance& inst, const OrderedSpec& spec, const SolverConfig& cfg) {
    check_spec(inst, spec);
    const std::size_t n = inst.n(), k = inst.k(), d = inst.dim();
    const double diam = inst.data_diameter();

    // Warm start: the all-ones aggregation is the plain minimax problem.
    SolverConfig warm_cfg = cfg;
    warm_cfg.warm_start = nullptr;
    Solution warm = solve_direct(inst, warm_cfg);

    auto om_max = [&](Span x) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const double v = om_value(inst, spec, x, a);
            if (v > best) {
                best = v;
                arg = a;
            }
        }
        return std::pair<double, std::size_t>(best, arg);
    };

    // Smoothed stage: smooth each norm term, keep the sort at the evaluation
    // point, fold the demand max through the usual softmax. Piecewise smooth
    // in x; the Armijo safeguard keeps the descent monotone across sorting
    // switches.
    Vec c(k), v(d), gn(d), gterm(d);
    Vec vals(n);
    std::vector<std::size_t> order(k);
    auto smooth_obj = [&](Span x, double mu, Vec& grad) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            Span pa = inst.demand().row(a);
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t cdx = 0; cdx < d; ++cdx) v[cdx] = pa[cdx] - inst.foci()(j, cdx) - x[cdx];
                c[j] = inst.foci_weights()[j] * inst.norm().smoothed(v, mu, nullptr);
            }
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
                if (c[i] != c[j]) return c[i] > c[j];
                return i < j;
            });
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += spec.lambda()[i] * c[order[i]];
            vals[a] = s;
            mx = std::max(mx, s);
        }
        double z = 0.0;
        for (std::size_t a = 0; a < n; ++a) z += std::exp((vals[a] - mx) / mu);
        for (std::size_t a = 0; a < n; ++a) {
            const double sw = std::exp((vals[a] - mx) / mu) / z;
            if (sw < 1e-18) continue;
            Span pa = inst.demand().row(a);
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t cdx = 0; cdx < d; ++cdx) v[cdx] = pa[cdx] - inst.foci()(j, cdx) - x[cdx];
                c[j] = inst.foci_weights()[j] * inst.norm().smoothed(v, mu, nullptr);
            }
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
                if (c[i] != c[j]) return c[i] > c[j];
                return i < j;
            });
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = order[i];
                for (std::size_t cdx = 0; cdx < d; ++cdx) v[cdx] = pa[cdx] - inst.foci()(j, cdx) - x[cdx];
                inst.norm().smoothed(v, mu, gn.data());
                axpy(-sw * spec.lambda()[i] * inst.foci_weights()[j], gn, grad);
            }
        }
        return mx + mu * std::log(z);
    };

    double lam_scale = 0.0;
    for (double l : spec.lambda()) lam_scale += l;
    lam_scale = std::max(lam_scale, spec.lambda()[0]);
    lam_scale = std::max(lam_scale, 1e-12);

    detail::ContinuationOptions copt;
    copt.mu0 = cfg.mu0 > 0.0 ? cfg.mu0 : 0.05 * diam;
    const double slack = inst.norm().smoothing_constant(d) * lam_scale +
                         std::log(static_cast<double>(std::max<std::size_t>(n, 2))) + 1.0;
    copt.mu_min = cfg.mu_min > 0.0 ? cfg.mu_min : 1e-14 * diam;
    copt.stop_mu = [&](double fcur) { return cfg.tol_r * std::max(fcur, 1e-9 * diam) / slack; };
    copt.max_stages = cfg.max_outer;
    copt.stage.max_iter = cfg.max_inner;
    copt.stage.gtol = 1e-11 * lam_scale;
    copt.stage.armijo_c = cfg.armijo_c;
    copt.stage.armijo_shrink = cfg.armijo_shrink;

    detail::ContinuationResult smooth_res = detail::continuation_minimize(smooth_obj, warm.x, copt);

    Vec best_x = smooth_res.x;
    auto [best_val, arg0] = om_max(best_x);
    (void)arg0;
    {
        auto [warm_val, warg] = om_max(warm.x);
        (void)warg;
        if (warm_val < best_val) {
            best_val = warm_val;
            best_x = warm.x;
        }
    }

    // Diminishing-step subgradient polish with best-iterate tracking.
    Vec x = best_x;
    const double eta0 = 0.05 * diam / lam_scale;
    const std::size_t polish = std::min<std::size_t>(cfg.max_inner, 2000);
    for (std::size_t t = 1; t <= polish; ++t) {
        auto [val, arg] = om_max(x);
        if (val < best_val) {
            best_val = val;
            best_x = x;
        }
        const Vec g = om_subgradient(inst, spec, x, arg);
        const double gn2 = norm2(g);
        if (gn2 <= 1e-14 * lam_scale) break;
        axpy(-eta0 / std::sqrt(static_cast<double>(t)) / std::max(gn2 / lam_scale, 1e-12), g, x);
    }

    Solution sol;
    sol.x = best_x;
    sol.r = best_val;
    sol.iterations = smooth_res.iterations + polish;
    sol.inner_solves = smooth_res.stages;
    sol.converged = smooth_res.converged;
    sol.residual = slack * smooth_res.mu_final;
    const double band = best_val * (1.0 - 1e-6);
    for (std::size_t a = 0; a < n; ++a)
        if (om_value(inst, spec, best_x, a) >= band) sol.support.push_back(a);
    return sol;
}

bool om_rearrangement_check(const Vec& distances, const Vec& lambda) {
    if (distances.size() != lambda.size())
        throw std::invalid_argument("rearrangement check: size mismatch");
    const std::size_t k = distances.size();
    if (k > 10) throw std::invalid_argument("rearrangement check: brute force limited to k <= 10");

    Vec sorted(distances);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double ours = 0.0;
    for (std::size_t i = 0; i < k; ++i) ours += lambda[i] * sorted[i];

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += lambda[i] * distances[perm[i]];
        best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return std::abs(ours - best) <= 1e-9 * std::max(1.0, std::abs(best));
}

}  // namespace polyel
