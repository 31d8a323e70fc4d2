#include "polyel/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace polyel {

Solution solve_subset(const Instance& inst, const std::vector<std::size_t>& subset,
                      const SolverConfig& cfg) {
    Solution sub = solve_direct(inst.restricted_to(subset), cfg);
    for (std::size_t& i : sub.support) i = subset[i];
    return sub;
}

namespace {

/// Spread heuristic: the two first-coordinate extremes, the point with the
/// largest coverage level when the polyellipsoid sits at their midpoint, then
/// farthest-point insertion up to d+1.
std::vector<std::size_t> spread_active_set(const Instance& inst) {
    const std::size_t n = inst.n(), d = inst.dim();
    const std::size_t target = std::min(n, d + 1);
    std::vector<std::size_t> s;
    if (n <= target) {
        for (std::size_t i = 0; i < n; ++i) s.push_back(i);
        return s;
    }

    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (inst.demand()(i, 0) < inst.demand()(lo, 0)) lo = i;
        if (inst.demand()(i, 0) > inst.demand()(hi, 0)) hi = i;
    }
    s.push_back(std::min(lo, hi));
    if (hi != lo) s.push_back(std::max(lo, hi));

    if (s.size() < target) {
        Vec mid(d, 0.0);
        for (std::size_t c = 0; c < d; ++c)
            mid[c] = 0.5 * (inst.demand()(lo, c) + inst.demand()(hi, c));
        const Vec um = inst.foci_mean();
        for (std::size_t c = 0; c < d; ++c) mid[c] -= um[c];
        double best = -1.0;
        std::size_t arg = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(s.begin(), s.end(), i) != s.end()) continue;
            const double p = phi(inst, mid, i);
            if (p > best) {
                best = p;
                arg = i;
            }
        }
        if (arg < n) s.push_back(arg);
    }

    Vec diff(d);
    while (s.size() < target) {
        double best = -1.0;
        std::size_t arg = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(s.begin(), s.end(), i) != s.end()) continue;
            double mind = std::numeric_limits<double>::infinity();
            for (std::size_t j : s) {
                for (std::size_t c = 0; c < d; ++c) diff[c] = inst.demand()(i, c) - inst.demand()(j, c);
                mind = std::min(mind, inst.norm().eval(diff));
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

/// Default S^0: an arbitrary d+1 demand points (the first by index), matching
/// the iteration-count behavior of seeding with an uninformed set.
std::vector<std::size_t> initial_active_set(const Instance& inst, const SolverConfig& cfg) {
    if (cfg.spread_initial_set) return spread_active_set(inst);
    const std::size_t target = std::min(inst.n(), inst.dim() + 1);
    std::vector<std::size_t> s(target);
    for (std::size_t i = 0; i < target; ++i) s[i] = i;
    return s;
}

std::vector<std::size_t> dedup_demand(const Instance& inst) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        bool dup = false;
        for (std::size_t j : keep) {
            if (dist2(inst.demand().row(i), inst.demand().row(j)) == 0.0) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    return keep;
}

}  // namespace

std::pair<Solution, DecompTrace> solve_decomposition(const Instance& inst, const SolverConfig& cfg) {
    DecompTrace trace;

    // Duplicates never change the max; solve on the distinct points and
    // report indices against the original instance.
    const std::vector<std::size_t> distinct = dedup_demand(inst);
    Instance work = inst.restricted_to(distinct);

    SolverConfig sub_cfg = cfg;
    sub_cfg.tol_r = std::min(cfg.tol_r * 0.1, 1e-8);
    sub_cfg.warm_start = nullptr;
    sub_cfg.initial_active.clear();

    if (!(cfg.tol_r > 0.0)) throw std::invalid_argument("decomposition: tol_r must be positive");

    std::vector<std::size_t> active;
    if (!cfg.initial_active.empty()) {
        for (std::size_t i : cfg.initial_active) {
            if (i >= inst.n()) throw std::invalid_argument("decomposition: initial index out of range");
            auto it = std::find(distinct.begin(), distinct.end(), i);
            if (it == distinct.end()) {
                // the index was a removed duplicate; use its keeper
                it = std::find_if(distinct.begin(), distinct.end(), [&](std::size_t j) {
                    return dist2(inst.demand().row(i), inst.demand().row(j)) == 0.0;
                });
            }
            active.push_back(static_cast<std::size_t>(it - distinct.begin()));
        }
        std::sort(active.begin(), active.end());
        active.erase(std::unique(active.begin(), active.end()), active.end());
    } else {
        active = initial_active_set(work, cfg);
    }
    Solution cur;
    std::size_t inner = 0;
    bool converged = false;
    bool subsolves_ok = true;

    const std::size_t max_iter = std::max<std::size_t>(cfg.max_outer, work.n() + 16);
    Vec warm;
    for (std::size_t it = 0; it < max_iter; ++it) {
        SolverConfig c = sub_cfg;
        if (!warm.empty()) c.warm_start = &warm;
        cur = solve_subset(work, active, c);
        ++inner;
        subsolves_ok = subsolves_ok && cur.converged;
        warm = cur.x;

        auto [rho, far] = objective(work, cur.x);
        DecompRecord rec;
        rec.active = active;
        rec.r = cur.r;
        rec.rho = rho;
        trace.max_active = std::max(trace.max_active, active.size());

        if (rho <= cur.r * (1.0 + cfg.tol_r)) {
            trace.records.push_back(std::move(rec));
            converged = true;
            break;
        }
        rec.entering = static_cast<std::ptrdiff_t>(far);

        // Re-solve every exchange candidate; keep the largest radius.
        double best_r = cur.r;
        std::size_t best_b = active.size();
        if (cfg.active_set_mode != ActiveSetMode::Growing) {
            std::vector<std::size_t> cand;
            for (std::size_t bi = 0; bi < active.size(); ++bi) {
                cand = active;
                cand[bi] = far;
                std::sort(cand.begin(), cand.end());
                SolverConfig cc = sub_cfg;
                cc.warm_start = &warm;
                Solution cs = solve_subset(work, cand, cc);
                ++inner;
                if (cs.r > best_r * (1.0 + 1e-9) + 1e-15 && cs.r > best_r) {
                    best_r = cs.r;
                    best_b = bi;
                }
            }
        }

        if (best_b < active.size()) {
            rec.leaving = static_cast<std::ptrdiff_t>(active[best_b]);
            active[best_b] = far;
            std::sort(active.begin(), active.end());
        } else if (cfg.active_set_mode == ActiveSetMode::Exchange) {
            // growing forbidden and no swap improves: stop where we stand
            trace.records.push_back(std::move(rec));
            break;
        } else {
            // No exchange strictly improves: grow the active set.
            trace.growing_used = true;
            active.push_back(far);
            std::sort(active.begin(), active.end());
        }
        trace.records.push_back(std::move(rec));
    }

    Solution sol = cur;
    for (std::size_t& i : sol.support) i = distinct[i];
    // Report against the original instance: the exact covering radius of the
    // returned translation and its support there.
    auto [rfull, argfull] = objective(inst, sol.x);
    (void)argfull;
    sol.r = rfull;
    sol.support = support_set(inst, sol.x, rfull);
    sol.iterations = trace.records.size();
    sol.inner_solves = inner;
    sol.converged = converged && subsolves_ok;

    // Remap trace indices to the original instance.
    for (DecompRecord& rec : trace.records) {
        for (std::size_t& i : rec.active) i = distinct[i];
        if (rec.entering >= 0) rec.entering = static_cast<std::ptrdiff_t>(distinct[rec.entering]);
        if (rec.leaving >= 0) rec.leaving = static_cast<std::ptrdiff_t>(distinct[rec.leaving]);
    }
    return {sol, trace};
}

std::string trace_to_csv(const DecompTrace& trace) {
    std::string csv = "it,size,r,rho,enter,leave\n";
    char buf[160];
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const DecompRecord& rec = trace.records[i];
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%.12g,%.12g,", i, rec.active.size(), rec.r, rec.rho);
        csv += buf;
        if (rec.entering >= 0) csv += std::to_string(rec.entering);
        csv += ',';
        if (rec.leaving >= 0) csv += std::to_string(rec.leaving);
        csv += '\n';
    }
    return csv;
}

}  // namespace polyel
