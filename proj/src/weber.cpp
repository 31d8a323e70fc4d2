#include "polyel/weber.hpp"

#include <cmath>
#include <stdexcept>

#include "descent.hpp"

namespace polyel {

WeberResult weber_solve(const PointSet& points, const Vec& weights, const NormSpec& norm,
                        const WeberOptions& opt) {
    if (points.empty()) throw std::invalid_argument("weber: need at least one point");
    if (weights.size() != points.size()) throw std::invalid_argument("weber: weights size mismatch");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("weber: tol must be positive");

    const std::size_t d = points.dim();
    PointSet active(0, d);
    Vec w;
    double wsum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("weber: negative weight");
        if (weights[i] == 0.0) continue;
        active.push_back(points.row(i));
        w.push_back(weights[i]);
        wsum += weights[i];
    }
    if (active.empty()) throw std::invalid_argument("weber: all weights are zero");

    WeberResult out;
    auto exact_value = [&](Span x) {
        Vec v(d);
        double s = 0.0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            Span p = active.row(i);
            for (std::size_t c = 0; c < d; ++c) v[c] = x[c] - p[c];
            s += w[i] * norm.eval(v);
        }
        return s;
    };

    if (active.size() == 1) {
        out.x = active.row_vec(0);
        out.value = 0.0;
        out.converged = true;
        return out;
    }

    // Weighted centroid start: inside the convex hull by construction.
    Vec x0(d, 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) axpy(w[i] / wsum, active.row(i), x0);
    if (opt.warm_start) x0 = *opt.warm_start;

    const double diam = active.bbox_diameter();
    double mu0 = opt.mu0 > 0.0 ? opt.mu0 : 0.1 * std::max(diam, 1e-12);
    const double mu_min = opt.mu_min > 0.0 ? opt.mu_min : opt.tol / 10.0;
    if (opt.warm_start && opt.mu0 <= 0.0) mu0 = std::max(mu_min * 16.0, 1e-4 * std::max(diam, 1e-12));
    mu0 = std::max(mu0, mu_min);

    Vec v(d), gn(d);
    auto smooth_obj = [&](Span x, double mu, Vec& grad) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double s = 0.0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            Span p = active.row(i);
            for (std::size_t c = 0; c < d; ++c) v[c] = x[c] - p[c];
            s += w[i] * norm.smoothed(v, mu, gn.data());
            axpy(w[i], gn, grad);
        }
        return s;
    };

    detail::ContinuationOptions copt;
    copt.mu0 = mu0;
    copt.mu_min = mu_min;
    copt.max_stages = 200;
    copt.stage.max_iter = opt.max_inner;
    copt.stage.gtol = std::min(1e-10, opt.tol * 1e-4);
    copt.stage.record_values = opt.record_stages;

    detail::ContinuationResult res = detail::continuation_minimize(smooth_obj, std::move(x0), copt);
    out.x = std::move(res.x);
    out.value = exact_value(out.x);
    out.converged = res.converged;
    out.iterations = res.iterations;
    out.stage_values = std::move(res.stage_values);
    return out;
}

WeberResult weber_solve(const PointSet& points, const Vec& weights, const NormSpec& norm, double tol) {
    WeberOptions opt;
    opt.tol = tol;
    return weber_solve(points, weights, norm, opt);
}

}  // namespace polyel
