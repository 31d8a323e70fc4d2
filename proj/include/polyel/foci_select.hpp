#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "polyel/config.hpp"
#include "polyel/model.hpp"

namespace polyel {

struct InfeasibleSelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SelectionState {
    // Explored foci subsets (ascending candidate indices), excluded from
    // later restricted solves; grows monotonically. Excluding whole subsets
    // rather than their member points keeps the lower bound valid for every
    // unexplored subset, which is what makes the bound-crossing exit exact.
    std::vector<std::vector<std::size_t>> excluded_sets;
    double upper = std::numeric_limits<double>::infinity();
    double lower = 0.0;
    std::vector<std::size_t> best_foci;
    std::size_t iterations = 0;
};

struct RestrictedResult {
    std::vector<std::size_t> foci;  // chosen candidate indices, ascending
    double r = 0.0;
};

/// Exact minimum over all non-excluded k-subsets of the candidates of the
/// covering radius on the given demand subset. Each subset is one small
/// minimax solve; a solve aborts early once its certified lower bound
/// exceeds the incumbent. Ties keep the lexicographically smallest subset.
/// Throws InfeasibleSelectionError when no admissible subset remains.
RestrictedResult solve_restricted(const PointSet& demand_subset, const PointSet& candidates,
                                  const std::vector<std::vector<std::size_t>>& excluded_sets,
                                  std::size_t k, const NormSpec& norm, const Vec& weights,
                                  const SolverConfig& cfg = {});

struct SelectionResult {
    std::vector<std::size_t> foci;
    Solution solution;
    SelectionState state;
};

/// Foci selection: alternates the restricted exact selection on the current
/// active demand set (lower bound) with a full decomposition solve for the
/// chosen foci (upper bound), excluding explored subsets, until the bounds
/// cross or the subsets run out. k = 1 returns after one full solve: the
/// radius is translation-invariant in the candidate choice.
///
/// The k weights attach to the chosen subset in ascending candidate order.
SelectionResult solve_foci_selection(const PointSet& demand, const PointSet& candidates,
                                     std::size_t k, const NormSpec& norm, const Vec& weights,
                                     const SolverConfig& cfg = {});

}  // namespace polyel
