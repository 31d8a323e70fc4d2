#pragma once

#include <cstdint>
#include <limits>

#include "polyel/vec.hpp"

namespace polyel {

/// Decomposition active-set policy. Auto exchanges first and grows only when
/// no swap strictly increases the radius (always sound; for strictly convex
/// norms an improving swap exists, so sets stay at d+1). Exchange forbids
/// growing; Growing skips the swap search entirely.
enum class ActiveSetMode { Auto, Exchange, Growing };

/// Knobs shared by the minimax solvers. Zero means "derive from the data
/// scale" for the smoothing schedule entries.
struct SolverConfig {
    double tol_r = 1e-7;    // relative radius tolerance
    double mu0 = 0.0;       // initial smoothing, 0 = 0.1 x data diameter
    double mu_min = 0.0;    // final smoothing, 0 = derived from tol_r
    std::size_t max_outer = 200;    // continuation stages / decomposition iterations
    std::size_t max_inner = 10000;  // descent iterations per stage
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    std::uint64_t seed = 0;

    // Lagrangean dual.
    double gap_tol = 1e-5;            // relative primal-dual gap target
    std::size_t dual_max_outer = 2000;

    // Enumeration pruning: abort once the solve certifies its optimum
    // exceeds this value.
    double prune_above = std::numeric_limits<double>::infinity();

    const Vec* warm_start = nullptr;  // not owned

    // Decomposition: explicit S^0 (indices into the demand set). Empty means
    // the first d+1 demand points; "spread" switches to the
    // extremes-plus-farthest-point heuristic.
    std::vector<std::size_t> initial_active;
    bool spread_initial_set = false;
    ActiveSetMode active_set_mode = ActiveSetMode::Auto;
};

}  // namespace polyel
