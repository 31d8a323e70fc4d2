#pragma once

// Internal smoothed-descent engine shared by the Weber and minimax solvers:
// BFGS directions (the decision variable is the d-dimensional translation,
// so the inverse Hessian is a tiny dense matrix) with Armijo backtracking,
// wrapped in a mu-halving continuation schedule.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "polyel/vec.hpp"

namespace polyel::detail {

struct StageResult {
    double f = 0.0;
    std::size_t iterations = 0;
    bool gradient_small = false;
    std::vector<double> values;  // per-iteration objective when recording
};

struct StageOptions {
    std::size_t max_iter = 10000;
    double gtol = 1e-10;
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    bool record_values = false;
};

/// Minimizes obj(x, grad) from x in place. The objective must be C^1; Armijo
/// backtracking keeps the iteration monotone.
template <class Obj>
StageResult bfgs_stage(Obj&& obj, Vec& x, const StageOptions& opt) {
    const std::size_t d = x.size();
    StageResult out;

    Vec g(d), gnew(d), p(d), xnew(d), s(d), y(d);
    std::vector<double> H(d * d, 0.0);  // inverse Hessian approximation
    auto reset_H = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) H[i * d + i] = 1.0;
    };
    reset_H();

    double f = obj(Span(x), g);
    if (opt.record_values) out.values.push_back(f);

    for (std::size_t it = 0; it < opt.max_iter; ++it) {
        double gmax = 0.0;
        for (double c : g) gmax = std::max(gmax, std::abs(c));
        if (gmax <= opt.gtol) {
            out.gradient_small = true;
            break;
        }

        // p = -H g
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += H[i * d + j] * g[j];
            p[i] = -acc;
        }
        double slope = dot(p, g);
        if (!(slope < 0.0)) {  // not a descent direction: fall back to steepest
            reset_H();
            for (std::size_t i = 0; i < d; ++i) p[i] = -g[i];
            slope = dot(p, g);
            if (!(slope < 0.0)) break;  // gradient numerically zero
        }

        double alpha = 1.0;
        double fnew = f;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < d; ++i) xnew[i] = x[i] + alpha * p[i];
            fnew = obj(Span(xnew), gnew);
            if (fnew <= f + opt.armijo_c * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= opt.armijo_shrink;
        }
        if (!accepted) break;  // objective flat at working precision

        for (std::size_t i = 0; i < d; ++i) {
            s[i] = xnew[i] - x[i];
            y[i] = gnew[i] - g[i];
        }
        const double ys = dot(y, s);
        if (ys > 1e-14 * norm2(y) * norm2(s) && ys > 0.0) {
            // H <- (I - s y^T / ys) H (I - y s^T / ys) + s s^T / ys
            const double rho = 1.0 / ys;
            Vec Hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) Hy[i] += H[i * d + j] * y[j];
            const double yHy = dot(y, Hy);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    H[i * d + j] += rho * rho * yHy * s[i] * s[j] + rho * s[i] * s[j]
                                    - rho * (s[i] * Hy[j] + Hy[i] * s[j]);
                }
        } else {
            reset_H();
        }

        const double df = f - fnew;
        x = xnew;
        std::swap(g, gnew);
        f = fnew;
        ++out.iterations;
        if (opt.record_values) out.values.push_back(f);
        if (df <= 1e-17 * (std::abs(f) + 1.0)) {
            out.gradient_small = true;  // stalled at working precision
            break;
        }
    }
    out.f = f;
    return out;
}

struct ContinuationOptions {
    double mu0 = 1.0;
    double mu_min = 1e-8;
    std::size_t max_stages = 200;
    StageOptions stage;
    // Optional dynamic stop: halving ends once mu <= stop_mu(current value).
    std::function<double(double)> stop_mu;
    // Optional early abort for enumeration pruning: called after each stage
    // with (stage value, mu); a true return abandons the solve.
    std::function<bool(double, double)> abort_check;
};

struct ContinuationResult {
    Vec x;
    double f_smoothed = 0.0;
    double mu_final = 0.0;
    std::size_t iterations = 0;
    std::size_t stages = 0;
    bool converged = false;
    bool aborted = false;
    std::vector<std::vector<double>> stage_values;
};

/// obj(x, mu, grad) -> smoothed value. Halves mu each stage, warm-starting
/// from the previous minimizer.
template <class Obj>
ContinuationResult continuation_minimize(Obj&& obj, Vec x0, const ContinuationOptions& opt) {
    ContinuationResult out;
    out.x = std::move(x0);
    double mu = opt.mu0;
    bool hit_floor = false;
    for (std::size_t stage = 0; stage < opt.max_stages; ++stage) {
        auto stage_obj = [&](Span x, Vec& grad) { return obj(x, mu, grad); };
        StageOptions sopt = opt.stage;
        // Early stages only need to place the iterate; the final stages do
        // the precision work.
        if (mu > opt.mu_min * 4.0) sopt.gtol = std::max(opt.stage.gtol, mu * 1e-6);
        StageResult sr = bfgs_stage(stage_obj, out.x, sopt);
        out.iterations += sr.iterations;
        ++out.stages;
        out.f_smoothed = sr.f;
        out.mu_final = mu;
        if (opt.stage.record_values) out.stage_values.push_back(std::move(sr.values));
        if (opt.abort_check && opt.abort_check(sr.f, mu)) {
            out.aborted = true;
            return out;
        }
        const double floor = opt.stop_mu ? std::max(opt.stop_mu(sr.f), opt.mu_min) : opt.mu_min;
        if (mu <= floor) {
            out.converged = sr.gradient_small;
            hit_floor = true;
            break;
        }
        mu = std::max(mu * 0.5, floor);
    }
    if (!hit_floor) out.converged = false;
    return out;
}

}  // namespace polyel::detail
