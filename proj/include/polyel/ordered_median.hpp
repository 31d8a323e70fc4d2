#pragma once

#include "polyel/config.hpp"
#include "polyel/model.hpp"

namespace polyel {

/// Rank weights for ordered-median aggregation. Convexity of the aggregated
/// objective requires lambda non-increasing and nonnegative; increasing
/// segments are rejected at construction.
class OrderedSpec {
  public:
    explicit OrderedSpec(Vec lambda);
    const Vec& lambda() const { return lambda_; }
    std::size_t size() const { return lambda_.size(); }

  private:
    Vec lambda_;
};

/// sum_i lambda_i c_sigma(i) over the weighted distances c_i = w_i ||a-u_i-x||
/// sorted non-increasing (ties by focus index).
double om_value(const Instance& inst, const OrderedSpec& spec, Span x, std::size_t a_index);

/// A subgradient of om_value at x: -sum_i lambda_i w_sigma(i) g_sigma(i) with
/// g_j a norm subgradient at a - u_j - x and sigma the sorting permutation.
Vec om_subgradient(const Instance& inst, const OrderedSpec& spec, Span x, std::size_t a_index);

/// Minimizes max_a om_value(x; a), warm-started from the plain minimax
/// solution, via smoothed descent plus a diminishing-step subgradient polish
/// with best-iterate tracking.
Solution solve_om(const Instance& inst, const OrderedSpec& spec, const SolverConfig& cfg = {});

/// Rearrangement identity behind the sorting-free reformulation: the
/// non-increasing pairing maximizes sum_i lambda_i c_pi(i) over permutations.
/// Checked by brute force (k <= 10).
bool om_rearrangement_check(const Vec& distances, const Vec& lambda);

}  // namespace polyel
