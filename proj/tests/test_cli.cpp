#include <doctest.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "polyel/bench.hpp"
#include "polyel/instance_io.hpp"
#include "polyel/minimax.hpp"
#include "polyel/plot.hpp"
#include "polyel/weber.hpp"

using namespace polyel;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

/// Minimal XML well-formedness scan: tags balance, attributes quoted.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '<') {
            ++i;
            continue;
        }
        std::size_t close = text.find('>', i);
        if (close == std::string::npos) return false;
        std::string tag = text.substr(i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        // quotes must balance inside the tag
        if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
        const bool closing = tag[0] == '/';
        const bool selfclosing = tag.back() == '/';
        std::string name = closing ? tag.substr(1) : tag;
        name = name.substr(0, name.find_first_of(" \t\n/"));
        if (closing) {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (!selfclosing) {
            stack.push_back(name);
        }
    }
    return stack.empty();
}

/// Pulls every "x y" coordinate pair out of the contour path element.
std::vector<std::pair<double, double>> contour_vertices(const std::string& svg) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t start = svg.find("d=\"", svg.find("<path fill=\"none\""));
    REQUIRE(start != std::string::npos);
    const std::size_t end = svg.find('"', start + 3);
    std::string d = svg.substr(start + 3, end - start - 3);
    for (char& c : d)
        if (c == 'M' || c == 'L') c = ' ';
    std::stringstream ss(d);
    double x, y;
    while (ss >> x >> y) pts.push_back({x, y});
    return pts;
}

}  // namespace

TEST_CASE("instance parsing, validation errors name the field") {
    const std::string good = R"({"v":1,"dim":2,"norm":{"lp":2},
        "foci":[[0,0],[1,0]],"foci_weights":[0.5,0.5],"demand":[[0,0],[2,0]]})";
    const ParsedInstance p = parse_instance_text(good);
    CHECK(p.instance.n() == 2);
    CHECK(p.instance.k() == 2);
    CHECK_FALSE(p.ordered.has_value());
    CHECK_FALSE(p.candidates.has_value());

    auto throws_mentioning = [](const std::string& text, const std::string& field) {
        try {
            parse_instance_text(text);
            return false;
        } catch (const std::invalid_argument& e) {
            return std::string(e.what()).find(field) != std::string::npos;
        }
    };
    CHECK(throws_mentioning(R"({"v":1,"dim":2,"norm":{"lp":2},"foci":[[0,0]],
        "foci_weights":[0.3,0.3],"demand":[[0,0]]})", "foci_weights"));
    CHECK(throws_mentioning(R"({"v":1,"dim":2,"norm":{"lp":0.2},"foci":[[0,0]],"demand":[[0,0]]})",
                            "norm.lp"));
    CHECK(throws_mentioning(R"({"v":1,"dim":2,"norm":{"lp":2},"foci":[[0,0]],"demand":[[0]]})",
                            "demand"));
    CHECK(throws_mentioning(R"({"v":2,"dim":2,"norm":{"lp":2},"foci":[[0,0]],"demand":[[0,0]]})",
                            "v"));
    CHECK(throws_mentioning(R"({"v":1,"dim":2,"norm":{"lp":2},"foci":[[0,0]],
        "demand":[[0,0]],"lambda":[0.5,1]})", "lambda"));
}

TEST_CASE("weight sums slightly off one are normalized, far off rejected") {
    const std::string near = R"({"v":1,"dim":2,"norm":{"lp":2},"foci":[[0,0],[1,0]],
        "foci_weights":[0.5000001,0.5],"demand":[[0,0]]})";
    const ParsedInstance p = parse_instance_text(near);
    CHECK(p.instance.foci_weights()[0] + p.instance.foci_weights()[1] == doctest::Approx(1.0));
}

TEST_CASE("round-trip: parse, serialize, parse is identity") {
    const std::string text = R"({"v":1,"dim":2,"norm":{"block":[[2,0],[1,2],[-1,2]]},
        "foci":[[0,0],[1,0]],"foci_weights":[0.25,0.75],"demand":[[0,0],[2,0],[1,7]],
        "lambda":[1,0.5],"candidates":[[5,5],[6,6]]})";
    const ParsedInstance p1 = parse_instance_text(text);
    const std::string ser1 = serialize_instance(
        p1.instance, p1.ordered ? &*p1.ordered : nullptr, p1.candidates ? &*p1.candidates : nullptr);
    const ParsedInstance p2 = parse_instance_text(ser1);
    const std::string ser2 = serialize_instance(
        p2.instance, p2.ordered ? &*p2.ordered : nullptr, p2.candidates ? &*p2.candidates : nullptr);
    CHECK(ser1 == ser2);
    CHECK(p2.instance.n() == 3);
    CHECK(p2.instance.norm().kind() == NormSpec::Kind::Block);
    CHECK(p2.candidates->size() == 2);
}

TEST_CASE("CSV demand files load with the declared dimension") {
    const std::string csv_path = "test_demand_tmp.csv";
    std::string csv;
    for (int i = 0; i < 50; ++i) csv += std::to_string(i) + "," + std::to_string(2 * i) + "\n";
    spit(csv_path, csv);
    const std::string text = R"({"v":1,"dim":2,"norm":{"lp":2},"foci":[[0,0]],
        "demand_csv":")" + csv_path + R"("})";
    const ParsedInstance p = parse_instance_text(text, ".");
    CHECK(p.instance.n() == 50);
    CHECK(p.instance.demand()(7, 1) == doctest::Approx(14.0));
    std::remove(csv_path.c_str());
}

TEST_CASE("generator: determinism, foci subset, exact uniform weights") {
    const Instance a = generate_instance(50, 5, 2, NormSpec::lp(2), 1234, false);
    const Instance b = generate_instance(50, 5, 2, NormSpec::lp(2), 1234, false);
    CHECK(a.demand().flat() == b.demand().flat());
    CHECK(a.foci().flat() == b.foci().flat());

    // foci are demand rows
    for (std::size_t j = 0; j < a.k(); ++j) {
        bool found = false;
        for (std::size_t i = 0; i < a.n() && !found; ++i)
            if (dist2(a.foci().row(j), a.demand().row(i)) == 0.0) found = true;
        CHECK(found);
    }
    for (double w : a.foci_weights()) CHECK(w == 0.2);

    const Instance c = generate_instance(50, 5, 2, NormSpec::lp(2), 4321, true);
    double s = 0;
    for (double w : c.foci_weights()) s += w;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(generate_instance(3, 5, 2, NormSpec::lp(2), 1, false), std::invalid_argument);
}

TEST_CASE("bench: empty grid emits only the header") {
    BenchSpec spec;
    spec.methods = {"direct"};
    CHECK(run_bench(spec) == "n,k,d,norm,weighted,method,seed,r,time_ms,iters,smax,agree\n");
}

TEST_CASE("bench: reference grid agrees across methods, parallel equals serial") {
    BenchSpec spec;
    spec.sizes = {50};
    spec.foci_counts = {1, 5};
    spec.norms = {"l2"};
    spec.weighted_modes = {false};
    spec.seeds = {1, 2};
    spec.methods = {"direct", "decomp"};
    const std::string csv = run_bench(spec);

    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);  // header
    int rows = 0;
    while (std::getline(ss, line)) {
        CHECK(line.back() == '1');  // agree flag
        // decomposition iteration column stays in the reported band
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 12);
        if (cells[5] == "decomp") {
            const int iters = std::stoi(cells[9]);
            CHECK(iters >= 2);
            CHECK(iters <= 12);
        }
        ++rows;
    }
    CHECK(rows == 2 * 2 * 2);

    BenchSpec par = spec;
    par.jobs = 4;
    CHECK(run_bench(par) == csv);
}

TEST_CASE("level-set SVG: circle case, vertex defect bound, well-formed XML") {
    PointSet A(0, 2), U(0, 2);
    A.push_back(Vec{0, 0});
    U.push_back(Vec{0, 0});
    const Instance inst(A, U, Vec{1.0}, NormSpec::lp(2));
    const std::size_t res = 96;
    const std::string svg = render_levelset_svg(inst, Vec{0, 0}, 1.0, res);
    CHECK(xml_well_formed(svg));

    // Invert the deterministic viewport mapping via two known anchors: the
    // demand point at the origin and the data box it spans.
    const auto verts = contour_vertices(svg);
    REQUIRE(verts.size() > 20);

    // The data box is the unit circle's [-1, 1]^2 padded by 5% of the span
    // on each side, so [-1.1, 1.1]^2, mapped uniformly onto [20, 980]^2 with
    // the y axis flipped.
    const double scale = 960.0 / 2.2;
    auto unmapx = [&](double px) { return (px - 20.0) / scale - 1.1; };
    auto unmapy = [&](double py) { return (1000.0 - py - 20.0) / scale - 1.1; };
    const double cell = 2.2 / (res - 1.0);
    const double cell_diag = cell * std::sqrt(2.0);
    for (const auto& [px, py] : verts) {
        const double x = unmapx(px), y = unmapy(py);
        const double defect = std::abs(std::hypot(x, y) - 1.0);
        CHECK(defect <= cell_diag + 1e-3);  // contract plus coordinate quantization
    }
    // Hausdorff-style closeness of the contour to the unit circle
    for (int i = 0; i < 32; ++i) {
        const double t = 2 * M_PI * i / 32;
        double best = 1e300;
        for (const auto& [px, py] : verts)
            best = std::min(best, std::hypot(unmapx(px) - std::cos(t), unmapy(py) - std::sin(t)));
        CHECK(best <= 2 * cell_diag);
    }
}

TEST_CASE("level-set SVG: small level near the Weber point of five foci") {
    const Instance gen = generate_instance(12, 5, 2, NormSpec::lp(2), 31, false);
    PointSet A(0, 2);
    A.push_back(Vec{50, 50});
    A.push_back(Vec{20, 80});
    const Instance inst(A, gen.foci(), gen.foci_weights(), NormSpec::lp(2));

    // reflected-foci Weber point of the first demand point, smallest level
    PointSet refl(0, 2);
    for (std::size_t j = 0; j < inst.k(); ++j) {
        Vec p(2);
        for (int c = 0; c < 2; ++c) p[c] = A(0, c) - inst.foci()(j, c);
        refl.push_back(p);
    }
    const WeberResult wb = weber_solve(refl, inst.foci_weights(), NormSpec::lp(2), 1e-9);
    const double r = wb.value * 1.02;

    const std::string svg = render_levelset_svg(inst, wb.x, r, 256);
    CHECK(xml_well_formed(svg));
    const auto verts = contour_vertices(svg);
    REQUIRE(verts.size() > 8);

    // Recover the affine data -> viewport map from the two demand circles.
    std::vector<std::pair<double, double>> circles;
    std::size_t pos = 0;
    while ((pos = svg.find("<circle cx=\"", pos)) != std::string::npos) {
        double cx, cy;
        REQUIRE(std::sscanf(svg.c_str() + pos, "<circle cx=\"%lf\" cy=\"%lf\"", &cx, &cy) == 2);
        circles.push_back({cx, cy});
        ++pos;
    }
    REQUIRE(circles.size() == 2);
    const double scale = (circles[1].first - circles[0].first) / (A(1, 0) - A(0, 0));
    const double scale_y = (circles[1].second - circles[0].second) / (A(1, 1) - A(0, 1));
    CHECK(scale == doctest::Approx(-scale_y).epsilon(1e-3));  // uniform, y flipped
    auto unmap = [&](double px, double py) {
        return std::pair<double, double>{A(0, 0) + (px - circles[0].first) / scale,
                                         A(0, 1) + (py - circles[0].second) / scale_y};
    };

    // With x chosen as the optimal translation for a0, the level set's Weber
    // center is exactly a0, and the contour lives in the distance ring
    // [r - r*, r + r*] around it.
    const double zx = A(0, 0), zy = A(0, 1);
    double mx = 0, my = 0;
    for (const auto& [px, py] : verts) {
        const auto [dx, dy] = unmap(px, py);
        mx += dx;
        my += dy;
    }
    mx /= verts.size();
    my /= verts.size();
    const double ring_out = r + wb.value, ring_in = r - wb.value;
    CHECK(std::hypot(mx - zx, my - zy) <= ring_out);
    for (const auto& [px, py] : verts) {
        const auto [dx, dy] = unmap(px, py);
        const double dist = std::hypot(dx - zx, dy - zy);
        CHECK(dist <= ring_out + 1.0);
        CHECK(dist >= ring_in - 1.0);
    }
}

TEST_CASE("plot rejects non-planar instances") {
    const Instance inst = generate_instance(4, 2, 3, NormSpec::lp(2), 3, false);
    CHECK_THROWS_AS(render_levelset_svg(inst, Vec{0, 0, 0}, 1.0, 32), std::invalid_argument);
}

TEST_CASE("CLI binary: gen, solve, trace, plot, determinism smoke") {
    const char* cli = std::getenv("POLYEL_CLI");
    if (!cli) return;  // library-only build
    const std::string base = std::string(cli);
    auto run = [](const std::string& cmd) { return std::system(cmd.c_str()); };

    REQUIRE(run(base + " gen --n 24 --k 3 --d 2 --norm l2 --seed 9 --out cli_inst_tmp.json") == 0);
    REQUIRE(run(base +
                " solve cli_inst_tmp.json --method decomp --trace cli_trace_tmp.csv"
                " --plot cli_plot_tmp.svg > cli_out_tmp.txt") == 0);
    const std::string trace1 = slurp("cli_trace_tmp.csv");
    const std::string svg1 = slurp("cli_plot_tmp.svg");
    CHECK(trace1.rfind("it,size,r,rho,enter,leave\n", 0) == 0);
    CHECK(xml_well_formed(svg1));

    REQUIRE(run(base +
                " solve cli_inst_tmp.json --method decomp --trace cli_trace_tmp2.csv"
                " --plot cli_plot_tmp2.svg > /dev/null") == 0);
    CHECK(slurp("cli_trace_tmp2.csv") == trace1);
    CHECK(slurp("cli_plot_tmp2.svg") == svg1);

    // exit code 2 on malformed input
    spit("cli_bad_tmp.json", "{\"v\": 1}");
    CHECK(run(base + " solve cli_bad_tmp.json 2> /dev/null") != 0);

    for (const char* f : {"cli_inst_tmp.json", "cli_trace_tmp.csv", "cli_plot_tmp.svg",
                          "cli_trace_tmp2.csv", "cli_plot_tmp2.svg", "cli_out_tmp.txt",
                          "cli_bad_tmp.json"})
        std::remove(f);
}
