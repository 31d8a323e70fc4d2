#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polyel/decomp.hpp"
#include "polyel/foci_select.hpp"
#include "polyel/instance_io.hpp"
#include "polyel/rng.hpp"

using namespace polyel;

namespace {

PointSet points(const std::vector<Vec>& rows) {
    PointSet p(0, rows[0].size());
    for (const Vec& r : rows) p.push_back(r);
    return p;
}

double brute_force_selection(const PointSet& demand, const PointSet& cands, std::size_t k,
                             const NormSpec& norm, const Vec& w) {
    double best = std::numeric_limits<double>::infinity();
    oracles::for_each_combination(cands.size(), k, [&](const std::vector<std::size_t>& pick) {
        PointSet foci(0, cands.dim());
        for (std::size_t i : pick) foci.push_back(cands.row(i));
        auto [sol, trace] = solve_decomposition(Instance(demand, foci, w, norm), {});
        best = std::min(best, sol.r);
    });
    return best;
}

}  // namespace

TEST_CASE("restricted selection: k = 1 is candidate-invariant, lowest index wins") {
    Rng rng(71);
    const PointSet demand = points({{0, 0}, {10, 0}, {5, 8}});
    const PointSet cands = points({{3, 3}, {50, 2}, {-7, 1}, {0, 40}});
    const RestrictedResult rr = solve_restricted(demand, cands, {}, 1, NormSpec::lp(2), {1.0});
    CHECK(rr.foci == std::vector<std::size_t>{0});

    // translation invariance: every candidate yields the same radius
    for (std::size_t c = 1; c < cands.size(); ++c) {
        PointSet foci(0, 2);
        foci.push_back(cands.row(c));
        const Solution s = solve_direct(Instance(demand, foci, {1.0}, NormSpec::lp(2)), {});
        CHECK(std::abs(s.r - rr.r) <= 1e-7 * rr.r);
    }
}

TEST_CASE("restricted selection: forced choice when |B| = k") {
    const PointSet demand = points({{0, 0}, {2, 0}});
    const PointSet cands = points({{0, 0}, {0, 3}});
    const Vec w = {0.5, 0.5};
    const RestrictedResult rr = solve_restricted(demand, cands, {}, 2, NormSpec::lp(2), w);
    CHECK(rr.foci == std::vector<std::size_t>{0, 1});
    const Solution ref = solve_direct(Instance(demand, cands, w, NormSpec::lp(2)), {});
    CHECK(rr.r == doctest::Approx(ref.r).epsilon(1e-7));
}

TEST_CASE("restricted selection matches subset enumeration at |B| = 6, k = 2") {
    Rng rng(72);
    for (int t = 0; t < 3; ++t) {
        PointSet demand(0, 2), cands(0, 2);
        for (int i = 0; i < 3; ++i) demand.push_back(Vec{rng.uniform(0, 20), rng.uniform(0, 20)});
        for (int i = 0; i < 6; ++i) cands.push_back(Vec{rng.uniform(0, 20), rng.uniform(0, 20)});
        const Vec w = {0.5, 0.5};
        const RestrictedResult rr = solve_restricted(demand, cands, {}, 2, NormSpec::lp(2), w);

        double best = 1e300;
        std::vector<std::size_t> arg;
        oracles::for_each_combination(6, 2, [&](const std::vector<std::size_t>& pick) {
            PointSet foci(0, 2);
            for (std::size_t i : pick) foci.push_back(cands.row(i));
            SolverConfig c;
            c.tol_r = 1e-9;
            const Solution s = solve_direct(Instance(demand, foci, w, NormSpec::lp(2)), c);
            if (s.r < best * (1 - 1e-9)) {
                best = s.r;
                arg = pick;
            }
        });
        CHECK(rr.r == doctest::Approx(best).epsilon(1e-6));
        CHECK(rr.foci == arg);
    }
}

TEST_CASE("restricted selection respects exclusions and signals exhaustion") {
    const PointSet demand = points({{0, 0}, {4, 0}});
    const PointSet cands = points({{0, 0}, {1, 1}, {2, 2}});
    const Vec w = {1.0};

    const RestrictedResult all = solve_restricted(demand, cands, {}, 1, NormSpec::lp(2), w);
    CHECK(all.foci == std::vector<std::size_t>{0});

    const RestrictedResult skip =
        solve_restricted(demand, cands, {{0}}, 1, NormSpec::lp(2), w);
    CHECK(skip.foci == std::vector<std::size_t>{1});

    CHECK_THROWS_AS(solve_restricted(demand, cands, {{0}, {1}, {2}}, 1, NormSpec::lp(2), w),
                    InfeasibleSelectionError);
    CHECK_THROWS_AS(solve_restricted(demand, cands, {}, 4, NormSpec::lp(2), Vec(4, 0.25)),
                    InfeasibleSelectionError);
}

TEST_CASE("full selection: k = |B| needs one iteration") {
    const PointSet demand = points({{0, 0}, {6, 0}, {3, 5}});
    const PointSet cands = points({{1, 1}, {-2, 0}});
    const Vec w = {0.5, 0.5};
    const SelectionResult res = solve_foci_selection(demand, cands, 2, NormSpec::lp(2), w);
    CHECK(res.foci == std::vector<std::size_t>{0, 1});
    CHECK(res.state.iterations == 1);
    CHECK(res.state.lower <= res.state.upper + 1e-12);
}

TEST_CASE("full selection: k = 1 needs one full solve") {
    Rng rng(73);
    PointSet demand(0, 2), cands(0, 2);
    for (int i = 0; i < 12; ++i) demand.push_back(Vec{rng.uniform(0, 50), rng.uniform(0, 50)});
    for (int i = 0; i < 5; ++i) cands.push_back(Vec{rng.uniform(0, 50), rng.uniform(0, 50)});
    const SelectionResult res = solve_foci_selection(demand, cands, 1, NormSpec::lp(2), {1.0});
    CHECK(res.state.iterations == 1);
    CHECK(res.foci.size() == 1);
    const double brute = brute_force_selection(demand, cands, 1, NormSpec::lp(2), {1.0});
    CHECK(std::abs(res.solution.r - brute) / brute <= 1e-6);
}

TEST_CASE("full selection equals brute force on small instances") {
    Rng rng(74);
    for (int t = 0; t < 3; ++t) {
        const std::size_t n = 8 + rng.index(10), nb = 5 + rng.index(4), k = 2 + rng.index(2);
        PointSet demand(0, 2), cands(0, 2);
        for (std::size_t i = 0; i < n; ++i) demand.push_back(Vec{rng.uniform(0, 100), rng.uniform(0, 100)});
        for (std::size_t i = 0; i < nb; ++i) cands.push_back(Vec{rng.uniform(0, 100), rng.uniform(0, 100)});
        const Vec w(k, 1.0 / static_cast<double>(k));
        const SelectionResult res = solve_foci_selection(demand, cands, k, NormSpec::lp(2), w);
        const double brute = brute_force_selection(demand, cands, k, NormSpec::lp(2), w);
        CHECK(std::abs(res.solution.r - brute) / brute <= 1e-5);
        CHECK(res.state.lower <= res.state.upper + 1e-12);
        CHECK(res.state.lower <= brute * (1 + 1e-9));
        CHECK(res.state.iterations >= 1);
    }
}

TEST_CASE("infeasible selection throws") {
    const PointSet demand = points({{0, 0}});
    const PointSet cands = points({{1, 1}});
    CHECK_THROWS_AS(solve_foci_selection(demand, cands, 2, NormSpec::lp(2), Vec{0.5, 0.5}),
                    InfeasibleSelectionError);
}
