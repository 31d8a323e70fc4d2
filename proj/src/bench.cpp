#include "polyel/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "polyel/decomp.hpp"
#include "polyel/instance_io.hpp"
#include "polyel/minimax.hpp"

namespace polyel {

namespace {

struct Cell {
    std::size_t n = 0, k = 0;
    std::string norm;
    bool weighted = false;
    std::uint64_t seed = 0;
};

struct RunRow {
    double r = std::numeric_limits<double>::quiet_NaN();
    double time_ms = 0.0;
    std::size_t iters = 0;
    std::size_t smax = 0;
    bool ok = false;
};

RunRow run_method(const Instance& inst, const std::string& method, const SolverConfig& cfg) {
    RunRow row;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (method == "direct") {
            Solution s = solve_direct(inst, cfg);
            row.r = s.r;
            row.iters = s.iterations;
        } else if (method == "lagrangean") {
            auto [s, cert] = solve_lagrangean(inst, cfg);
            row.r = s.r;
            row.iters = s.iterations;
        } else if (method == "decomp") {
            auto [s, trace] = solve_decomposition(inst, cfg);
            row.r = s.r;
            row.iters = s.iterations;
            row.smax = trace.max_active;
        } else {
            throw std::invalid_argument("unknown method '" + method + "'");
        }
        row.ok = true;
    } catch (const std::exception&) {
        row.ok = false;
    }
    row.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace

std::string run_bench(const BenchSpec& spec) {
    std::vector<Cell> cells;
    for (std::size_t n : spec.sizes)
        for (std::size_t k : spec.foci_counts)
            for (const std::string& norm : spec.norms)
                for (bool weighted : spec.weighted_modes)
                    for (std::uint64_t seed : spec.seeds) cells.push_back({n, k, norm, weighted, seed});

    const std::size_t m = spec.methods.size();
    std::vector<RunRow> rows(cells.size() * m);

    auto run_cell = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        try {
            const Instance inst = generate_instance(cell.n, cell.k, spec.dim, norm_by_name(cell.norm),
                                                    cell.seed, cell.weighted);
            for (std::size_t mi = 0; mi < m; ++mi)
                rows[ci * m + mi] = run_method(inst, spec.methods[mi], spec.solver);
        } catch (const std::exception&) {
            // generation failure: leave the whole cell as failed rows
        }
    };

    if (spec.jobs > 1 && cells.size() > 1) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t ci = next.fetch_add(1);
                if (ci >= cells.size()) return;
                run_cell(ci);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(spec.jobs, cells.size()); ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    } else {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    }

    std::string csv = "n,k,d,norm,weighted,method,seed,r,time_ms,iters,smax,agree\n";
    char buf[256];
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        // Cross-method agreement within the cell, 1e-4 relative.
        int agree = 1;
        for (std::size_t a = 0; a < m && agree; ++a)
            for (std::size_t b = a + 1; b < m && agree; ++b) {
                const RunRow &ra = rows[ci * m + a], &rb = rows[ci * m + b];
                if (!ra.ok || !rb.ok) {
                    agree = 0;
                    break;
                }
                const double scale = std::max({std::abs(ra.r), std::abs(rb.r), 1e-12});
                if (std::abs(ra.r - rb.r) > 1e-4 * scale) agree = 0;
            }
        for (std::size_t mi = 0; mi < m; ++mi) {
            const RunRow& row = rows[ci * m + mi];
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%s,%d,%s,%llu,%.10g,%.3f,%zu,%zu,%d\n",
                          cell.n, cell.k, spec.dim, cell.norm.c_str(), cell.weighted ? 1 : 0,
                          spec.methods[mi].c_str(),
                          static_cast<unsigned long long>(cell.seed), row.r,
                          spec.with_times ? row.time_ms : 0.0, row.iters, row.smax, agree);
            csv += buf;
        }
    }
    return csv;
}

}  // namespace polyel
