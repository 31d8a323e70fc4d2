#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "polyel/config.hpp"
#include "polyel/minimax.hpp"
#include "polyel/model.hpp"

namespace polyel {

struct DecompRecord {
    std::vector<std::size_t> active;  // S^k, original demand indices
    double r = 0.0;                   // subproblem radius
    double rho = 0.0;                 // farthest value over the full demand set
    std::ptrdiff_t entering = -1;     // a^k, -1 on the converged pass
    std::ptrdiff_t leaving = -1;      // b^k, -1 on growing steps
};

struct DecompTrace {
    std::vector<DecompRecord> records;
    std::size_t max_active = 0;
    bool growing_used = false;
};

/// MEP restricted to the given demand subset; the inner oracle of the
/// decomposition. Support indices are reported against the full instance.
Solution solve_subset(const Instance& inst, const std::vector<std::size_t>& subset,
                      const SolverConfig& cfg = {});

/// Exchange decomposition: solve on a (d+1)-point active set, pull in the
/// farthest uncovered point, re-solve every exchange candidate exactly and
/// keep the one with the largest radius; when no exchange strictly increases
/// the radius the active set grows instead (the non-strictly-convex-norm
/// safeguard), which keeps the radius sequence monotone.
std::pair<Solution, DecompTrace> solve_decomposition(const Instance& inst,
                                                     const SolverConfig& cfg = {});

/// CSV export, columns it,size,r,rho,enter,leave (0-based indices, empty
/// field when absent).
std::string trace_to_csv(const DecompTrace& trace);

}  // namespace polyel
