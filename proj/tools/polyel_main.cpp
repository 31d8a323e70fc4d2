#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polyel/bench.hpp"
#include "polyel/decomp.hpp"
#include "polyel/foci_select.hpp"
#include "polyel/instance_io.hpp"
#include "polyel/minimax.hpp"
#include "polyel/onedim.hpp"
#include "polyel/ordered_median.hpp"
#include "polyel/plot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInfeasible = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << content;
}

std::string format_point(const polyel::Vec& x) {
    std::string s = "(";
    char buf[40];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.10g", x[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s + ")";
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-radius covering polyellipsoids: solvers, selection, benchmarks"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "Generate a random instance file");
    std::size_t gen_n = 50, gen_k = 5, gen_d = 2;
    std::string gen_norm = "l2", gen_out;
    std::uint64_t gen_seed = 1;
    bool gen_weighted = false, gen_anywhere = false;
    gen->add_option("--n", gen_n, "Demand point count");
    gen->add_option("--k", gen_k, "Focus count");
    gen->add_option("--d", gen_d, "Dimension");
    gen->add_option("--norm", gen_norm, "Norm name (l1, l1.5, l2, l3, linf, hex, ...)");
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_flag("--weighted", gen_weighted, "Random foci weights instead of 1/k");
    gen->add_flag("--foci-anywhere", gen_anywhere, "Sample foci uniformly instead of from demand");
    gen->add_option("--out", gen_out, "Output instance path (default stdout)");

    // --- solve -------------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "Solve an instance");
    std::string solve_path, solve_method = "decomp", solve_plot, solve_trace;
    double solve_tol = 1e-7;
    std::size_t plot_res = 128;
    solve->add_option("instance", solve_path, "Instance JSON path")->required();
    solve->add_option("--method", solve_method, "direct | lagrangean | decomp")
        ->check(CLI::IsMember({"direct", "lagrangean", "decomp"}));
    solve->add_option("--tol", solve_tol, "Relative radius tolerance");
    solve->add_option("--plot", solve_plot, "Write the level-set SVG here (d = 2)");
    solve->add_option("--plot-resolution", plot_res, "Contour grid resolution");
    solve->add_option("--trace", solve_trace, "Write the decomposition trace CSV here");
    std::string solve_active_set = "auto";
    solve->add_option("--active-set", solve_active_set,
                      "Decomposition active-set policy: auto | exchange | growing")
        ->check(CLI::IsMember({"auto", "exchange", "growing"}));
    bool solve_spread_init = false;
    solve->add_flag("--spread-init", solve_spread_init,
                    "Seed the decomposition with spread points instead of the first d+1");

    // --- solve1d -----------------------------------------------------------
    auto* s1d = app.add_subcommand("solve1d", "Exact one-dimensional solve");
    std::string s1d_path;
    s1d->add_option("instance", s1d_path, "Instance JSON path (dim 1)")->required();

    // --- select-foci ---------------------------------------------------------
    auto* sel = app.add_subcommand("select-foci", "Choose k foci from candidates");
    std::string sel_path, sel_candidates;
    std::size_t sel_k = 0;
    double sel_tol = 1e-7;
    sel->add_option("instance", sel_path, "Instance JSON path")->required();
    sel->add_option("--k", sel_k, "Number of foci to select")->required();
    sel->add_option("--candidates", sel_candidates, "Candidate CSV (overrides the instance field)");
    sel->add_option("--tol", sel_tol, "Relative radius tolerance");

    // --- om ------------------------------------------------------------------
    auto* om = app.add_subcommand("om", "Ordered-median covering solve");
    std::string om_path, om_lambda;
    double om_tol = 1e-7;
    om->add_option("instance", om_path, "Instance JSON path")->required();
    om->add_option("--lambda", om_lambda, "Comma list of rank weights (overrides the instance field)");
    om->add_option("--tol", om_tol, "Relative radius tolerance");

    // --- bench ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Grid benchmark, CSV report");
    std::string b_sizes = "50", b_ks = "1,5", b_norms = "l2", b_methods = "direct,decomp";
    std::string b_seeds = "1", b_weighted = "off", b_out;
    std::size_t b_dim = 2, b_jobs = 1;
    bool b_times = false;
    double b_tol = 1e-7;
    bench->add_option("--sizes", b_sizes, "Comma list of demand sizes");
    bench->add_option("--ks", b_ks, "Comma list of focus counts");
    bench->add_option("--norms", b_norms, "Comma list of norm names");
    bench->add_option("--methods", b_methods, "Comma list of methods");
    bench->add_option("--seeds", b_seeds, "Comma list of seeds");
    bench->add_option("--weighted", b_weighted, "off | on | both")
        ->check(CLI::IsMember({"off", "on", "both"}));
    bench->add_option("--d", b_dim, "Dimension");
    bench->add_option("--jobs", b_jobs, "Parallel grid cells");
    bench->add_flag("--times", b_times, "Include wall times (nondeterministic column)");
    bench->add_option("--tol", b_tol, "Relative radius tolerance");
    bench->add_option("--out", b_out, "Output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const polyel::Instance inst = polyel::generate_instance(
                gen_n, gen_k, gen_d, polyel::norm_by_name(gen_norm), gen_seed, gen_weighted,
                !gen_anywhere);
            const std::string text = polyel::serialize_instance(inst);
            if (gen_out.empty()) std::cout << text;
            else write_file(gen_out, text);
            return kExitOk;
        }

        if (*solve) {
            const polyel::ParsedInstance parsed = polyel::parse_instance(solve_path);
            polyel::SolverConfig cfg;
            cfg.tol_r = solve_tol;
            cfg.spread_initial_set = solve_spread_init;
            if (solve_active_set == "exchange") cfg.active_set_mode = polyel::ActiveSetMode::Exchange;
            if (solve_active_set == "growing") cfg.active_set_mode = polyel::ActiveSetMode::Growing;
            polyel::Solution sol;
            polyel::DecompTrace trace;
            if (solve_method == "direct") {
                sol = polyel::solve_direct(parsed.instance, cfg);
            } else if (solve_method == "lagrangean") {
                auto [s, cert] = polyel::solve_lagrangean(parsed.instance, cfg);
                sol = s;
                std::printf("dual_value = %.10g\n", cert.dual_value);
                std::printf("gap = %.3g\n", sol.residual);
            } else {
                auto [s, tr] = polyel::solve_decomposition(parsed.instance, cfg);
                sol = s;
                trace = tr;
                std::printf("decomp_iterations = %zu\n", tr.records.size());
                std::printf("max_active_set = %zu\n", tr.max_active);
            }
            std::printf("r = %.10g\n", sol.r);
            std::printf("x = %s\n", format_point(sol.x).c_str());
            std::printf("support =");
            for (std::size_t i : sol.support) std::printf(" %zu", i);
            std::printf("\nconverged = %s\n", sol.converged ? "true" : "false");
            if (!solve_trace.empty()) write_file(solve_trace, polyel::trace_to_csv(trace));
            if (!solve_plot.empty())
                polyel::plot_levelset(parsed.instance, sol.x, sol.r, solve_plot, plot_res);
            return sol.converged ? kExitOk : kExitNoConvergence;
        }

        if (*s1d) {
            const polyel::ParsedInstance parsed = polyel::parse_instance(s1d_path);
            if (parsed.instance.dim() != 1)
                throw std::invalid_argument("solve1d needs a dim-1 instance");
            polyel::Vec a, u;
            for (std::size_t i = 0; i < parsed.instance.n(); ++i) a.push_back(parsed.instance.demand()(i, 0));
            for (std::size_t j = 0; j < parsed.instance.k(); ++j) u.push_back(parsed.instance.foci()(j, 0));
            const polyel::Solve1DResult res =
                polyel::solve_1d(a, u, parsed.instance.foci_weights());
            std::printf("r = %.12g\nx = %.12g\nbranch = %s\n", res.r, res.x,
                        res.explicit_branch ? "explicit" : "pair-search");
            return kExitOk;
        }

        if (*sel) {
            const polyel::ParsedInstance parsed = polyel::parse_instance(sel_path);
            polyel::PointSet cands;
            if (!sel_candidates.empty()) {
                std::ifstream in(sel_candidates);
                if (!in) throw std::invalid_argument("cannot open candidates file");
                cands = polyel::PointSet(0, parsed.instance.dim());
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    const std::vector<double> row = parse_double_list(line);
                    if (row.size() != parsed.instance.dim())
                        throw std::invalid_argument("candidates row dimension mismatch");
                    cands.push_back(row);
                }
            } else if (parsed.candidates) {
                cands = *parsed.candidates;
            } else {
                throw std::invalid_argument("no candidates: add a \"candidates\" field or --candidates");
            }
            if (sel_k == 0 || sel_k > cands.size())
                throw polyel::InfeasibleSelectionError("k must be in [1, |candidates|]");
            polyel::SolverConfig cfg;
            cfg.tol_r = sel_tol;
            polyel::Vec w(sel_k, 1.0 / static_cast<double>(sel_k));
            const polyel::SelectionResult res = polyel::solve_foci_selection(
                parsed.instance.demand(), cands, sel_k, parsed.instance.norm(), w, cfg);
            std::printf("r = %.10g\n", res.solution.r);
            std::printf("x = %s\n", format_point(res.solution.x).c_str());
            std::printf("foci =");
            for (std::size_t i : res.foci) std::printf(" %zu", i);
            std::printf("\niterations = %zu\nlower = %.10g\nupper = %.10g\n", res.state.iterations,
                        res.state.lower, res.state.upper);
            return kExitOk;
        }

        if (*om) {
            const polyel::ParsedInstance parsed = polyel::parse_instance(om_path);
            std::optional<polyel::OrderedSpec> spec = parsed.ordered;
            if (!om_lambda.empty()) spec.emplace(parse_double_list(om_lambda));
            if (!spec)
                throw std::invalid_argument("no lambda: add a \"lambda\" field or --lambda");
            polyel::SolverConfig cfg;
            cfg.tol_r = om_tol;
            const polyel::Solution sol = polyel::solve_om(parsed.instance, *spec, cfg);
            std::printf("r = %.10g\nx = %s\nconverged = %s\n", sol.r, format_point(sol.x).c_str(),
                        sol.converged ? "true" : "false");
            return sol.converged ? kExitOk : kExitNoConvergence;
        }

        if (*bench) {
            polyel::BenchSpec spec;
            for (double v : parse_double_list(b_sizes)) spec.sizes.push_back(static_cast<std::size_t>(v));
            for (double v : parse_double_list(b_ks)) spec.foci_counts.push_back(static_cast<std::size_t>(v));
            {
                std::stringstream ss(b_norms);
                std::string cell;
                while (std::getline(ss, cell, ',')) spec.norms.push_back(cell);
            }
            {
                std::stringstream ss(b_methods);
                std::string cell;
                while (std::getline(ss, cell, ',')) spec.methods.push_back(cell);
            }
            for (double v : parse_double_list(b_seeds)) spec.seeds.push_back(static_cast<std::uint64_t>(v));
            if (b_weighted == "off") spec.weighted_modes = {false};
            else if (b_weighted == "on") spec.weighted_modes = {true};
            else spec.weighted_modes = {false, true};
            spec.dim = b_dim;
            spec.jobs = b_jobs;
            spec.with_times = b_times;
            spec.solver.tol_r = b_tol;
            const std::string csv = polyel::run_bench(spec);
            if (b_out.empty()) std::cout << csv;
            else write_file(b_out, csv);
            return kExitOk;
        }
    } catch (const polyel::InfeasibleSelectionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNoConvergence;
    }
    return kExitOk;
}
