#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyel/config.hpp"

namespace polyel {

struct BenchSpec {
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> foci_counts;
    std::vector<std::string> norms;     // names per norm_by_name
    std::vector<bool> weighted_modes;   // e.g. {false, true}
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;   // direct | lagrangean | decomp
    std::size_t dim = 2;
    std::size_t jobs = 1;
    bool with_times = false;  // wall times are the one nondeterministic column
    SolverConfig solver;
};

/// Runs the grid and renders the CSV report, columns
/// n,k,d,norm,weighted,method,seed,r,time_ms,iters,smax,agree.
/// Per-run failures become rows with r=nan; the grid never aborts. Rows are
/// emitted in deterministic grid order regardless of the job count.
std::string run_bench(const BenchSpec& spec);

}  // namespace polyel
