#include "polyel/foci_select.hpp"

#include <algorithm>
#include <cmath>

#include "polyel/decomp.hpp"
#include "polyel/minimax.hpp"

namespace polyel {

namespace {

PointSet gather_rows(const PointSet& pts, const std::vector<std::size_t>& idx) {
    PointSet out(0, pts.dim());
    for (std::size_t i : idx) out.push_back(pts.row(i));
    return out;
}

/// First-coordinate extremes plus farthest-point padding; the foci-free
/// analogue of the decomposition's spread start.
std::vector<std::size_t> spread_subset(const PointSet& pts, const NormSpec& norm, std::size_t count) {
    const std::size_t n = pts.size(), d = pts.dim();
    std::vector<std::size_t> s;
    if (n <= count) {
        for (std::size_t i = 0; i < n; ++i) s.push_back(i);
        return s;
    }
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (pts(i, 0) < pts(lo, 0)) lo = i;
        if (pts(i, 0) > pts(hi, 0)) hi = i;
    }
    s.push_back(std::min(lo, hi));
    if (hi != lo) s.push_back(std::max(lo, hi));
    Vec diff(d);
    while (s.size() < count) {
        double best = -1.0;
        std::size_t arg = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(s.begin(), s.end(), i) != s.end()) continue;
            double mind = std::numeric_limits<double>::infinity();
            for (std::size_t j : s) {
                for (std::size_t c = 0; c < d; ++c) diff[c] = pts(i, c) - pts(j, c);
                mind = std::min(mind, norm.eval(diff));
            }
            if (mind > best) {
                best = mind;
                arg = i;
            }
        }
        if (arg == n) break;
        s.push_back(arg);
    }
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

RestrictedResult solve_restricted(const PointSet& demand_subset, const PointSet& candidates,
                                  const std::vector<std::vector<std::size_t>>& excluded_sets,
                                  std::size_t k, const NormSpec& norm, const Vec& weights,
                                  const SolverConfig& cfg) {
    if (k == 0) throw std::invalid_argument("solve_restricted: k must be positive");
    if (weights.size() != k) throw std::invalid_argument("solve_restricted: need one weight per chosen focus");
    if (candidates.size() < k)
        throw InfeasibleSelectionError("solve_restricted: fewer than k candidates");

    SolverConfig sub = cfg;
    sub.tol_r = std::min(cfg.tol_r, 1e-8);
    sub.warm_start = nullptr;
    sub.initial_active.clear();

    RestrictedResult best;
    best.r = std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        const bool excluded =
            std::find(excluded_sets.begin(), excluded_sets.end(), pick) != excluded_sets.end();
        if (!excluded) {
            SolverConfig c = sub;
            if (found) c.prune_above = best.r;
            Solution s = solve_direct(Instance(demand_subset, gather_rows(candidates, pick), weights, norm), c);
            // Strictly-better update keeps the lexicographically smallest
            // subset among radius ties.
            if (!found || s.r < best.r * (1.0 - 1e-9)) {
                best.r = s.r;
                best.foci = pick;
                found = true;
            }
        }
        // Next combination.
        std::size_t i = k;
        bool done = true;
        while (i-- > 0) {
            if (pick[i] + (k - i) < candidates.size()) {
                ++pick[i];
                for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                done = false;
                break;
            }
            if (i == 0) break;
        }
        if (done) break;
    }
    if (!found) throw InfeasibleSelectionError("solve_restricted: every subset is excluded");
    return best;
}

SelectionResult solve_foci_selection(const PointSet& demand, const PointSet& candidates,
                                     std::size_t k, const NormSpec& norm, const Vec& weights,
                                     const SolverConfig& cfg) {
    if (candidates.size() < k)
        throw InfeasibleSelectionError("solve_foci_selection: fewer candidates than k");
    if (demand.empty()) throw std::invalid_argument("solve_foci_selection: empty demand set");

    SelectionResult out;
    SelectionState& st = out.state;

    std::vector<std::size_t> active = spread_subset(demand, norm, demand.dim() + 1);

    if (k == 1) {
        // Single-focus radius is invariant under the candidate choice; one
        // full solve settles the problem.
        const RestrictedResult rr =
            solve_restricted(gather_rows(demand, active), candidates, {}, k, norm, weights, cfg);
        auto [sol, trace] = solve_decomposition(
            Instance(demand, gather_rows(candidates, rr.foci), weights, norm), cfg);
        st.upper = sol.r;
        st.lower = sol.r;
        st.best_foci = rr.foci;
        st.excluded_sets.push_back(rr.foci);
        st.iterations = 1;
        out.solution = std::move(sol);
        out.foci = rr.foci;
        return out;
    }

    bool have_best = false;
    while (true) {
        RestrictedResult rr;
        try {
            rr = solve_restricted(gather_rows(demand, active), candidates, st.excluded_sets, k,
                                  norm, weights, cfg);
        } catch (const InfeasibleSelectionError&) {
            break;  // every subset explored
        }
        st.lower = std::max(st.lower, rr.r);
        if (have_best && st.lower >= st.upper * (1.0 - 1e-12)) break;

        auto [sol, trace] = solve_decomposition(
            Instance(demand, gather_rows(candidates, rr.foci), weights, norm), cfg);
        if (!have_best || sol.r < st.upper) {
            st.upper = sol.r;
            st.best_foci = rr.foci;
            out.solution = sol;
            have_best = true;
        }
        // Next active set: the final Helly set of the full solve.
        if (!trace.records.empty() && !trace.records.back().active.empty())
            active = trace.records.back().active;

        st.excluded_sets.push_back(rr.foci);
        ++st.iterations;
        if (st.upper <= st.lower * (1.0 + 1e-6)) break;
    }

    // The restricted bound only covers unexplored subsets; the incumbent
    // caps it into a bound on the global optimum.
    st.lower = std::min(st.lower, st.upper);
    out.foci = st.best_foci;
    return out;
}

}  // namespace polyel
