#pragma once

#include <vector>

#include "polyel/norms.hpp"
#include "polyel/vec.hpp"

namespace polyel {

struct WeberOptions {
    double tol = 1e-7;              // absolute tolerance on the objective value
    std::size_t max_inner = 10000;  // descent iterations per smoothing stage
    double mu0 = 0.0;               // 0 = 0.1 x data diameter (reduced under warm starts)
    double mu_min = 0.0;            // 0 = tol / 10
    const Vec* warm_start = nullptr;
    bool record_stages = false;
};

struct WeberResult {
    Vec x;
    double value = 0.0;  // exact objective at x (always an upper bound on the minimum)
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<std::vector<double>> stage_values;  // per-stage smoothed objective trace
};

/// Minimizes sum_i w_i ||x - p_i|| by smoothed descent with mu-continuation.
/// Zero-weight points are dropped; throws if all weights are zero.
WeberResult weber_solve(const PointSet& points, const Vec& weights, const NormSpec& norm,
                        const WeberOptions& opt = {});

/// Convenience overload matching the (points, weights, norm, tol) contract.
WeberResult weber_solve(const PointSet& points, const Vec& weights, const NormSpec& norm, double tol);

}  // namespace polyel
