#include "polyel/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "polyel/rng.hpp"

namespace polyel {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("instance file: field '" + field + "' " + why);
}

PointSet parse_points(const json& arr, const std::string& field, std::size_t dim) {
    if (!arr.is_array() || arr.empty()) fail(field, "must be a non-empty array of points");
    PointSet pts(0, dim);
    Vec row(dim);
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != dim) fail(field, "has a row of the wrong dimension");
        for (std::size_t c = 0; c < dim; ++c) {
            if (!p[c].is_number()) fail(field, "has a non-numeric coordinate");
            row[c] = p[c].get<double>();
            if (!std::isfinite(row[c])) fail(field, "has a non-finite coordinate");
        }
        pts.push_back(row);
    }
    return pts;
}

PointSet parse_csv_points(const std::string& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) fail("demand_csv", "file '" + path + "' cannot be opened");
    PointSet pts(0, dim);
    Vec row(dim);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= dim) fail("demand_csv", "row has too many columns");
            row[c++] = std::stod(cell);
        }
        if (c != dim) fail("demand_csv", "row has too few columns");
        for (double x : row)
            if (!std::isfinite(x)) fail("demand_csv", "has a non-finite coordinate");
        pts.push_back(row);
    }
    if (pts.empty()) fail("demand_csv", "contains no points");
    return pts;
}

NormSpec parse_norm(const json& j, std::size_t dim) {
    if (!j.is_object()) fail("norm", "must be an object");
    if (j.contains("lp")) {
        const auto& p = j["lp"];
        if (p.is_string()) {
            if (p.get<std::string>() == "inf") return NormSpec::lp(NormSpec::kInfinity);
            fail("norm.lp", "string form must be \"inf\"");
        }
        if (!p.is_number()) fail("norm.lp", "must be a number or \"inf\"");
        const double pv = p.get<double>();
        if (!(pv >= 1.0)) fail("norm.lp", "must satisfy p >= 1");
        return NormSpec::lp(pv);
    }
    if (j.contains("block")) {
        PointSet ball = parse_points(j["block"], "norm.block", dim);
        if (j.contains("polar")) return NormSpec::block_with_polar(ball, parse_points(j["polar"], "norm.polar", dim));
        if (dim != 2) fail("norm.block", "needs an explicit \"polar\" list when dim != 2");
        return NormSpec::block(ball);
    }
    fail("norm", "must contain \"lp\" or \"block\"");
}

}  // namespace

ParsedInstance parse_instance_text(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("instance file: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("(root)", "must be a JSON object");
    if (!j.contains("v") || !j["v"].is_number_integer() || j["v"].get<int>() != 1)
        fail("v", "must be the integer 1");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        fail("dim", "must be a positive integer");
    const std::size_t dim = j["dim"].get<std::size_t>();

    if (!j.contains("norm")) fail("norm", "is required");
    NormSpec norm = parse_norm(j["norm"], dim);

    if (!j.contains("foci")) fail("foci", "is required");
    PointSet foci = parse_points(j["foci"], "foci", dim);

    Vec weights;
    if (j.contains("foci_weights")) {
        const auto& w = j["foci_weights"];
        if (!w.is_array() || w.size() != foci.size()) fail("foci_weights", "must list one weight per focus");
        for (const auto& x : w) {
            if (!x.is_number()) fail("foci_weights", "has a non-numeric entry");
            weights.push_back(x.get<double>());
            if (!std::isfinite(weights.back())) fail("foci_weights", "has a non-finite entry");
        }
        double s = 0.0;
        for (double x : weights) s += x;
        if (std::abs(s - 1.0) > 1e-6) fail("foci_weights", "must sum to 1 within 1e-6");
    } else {
        weights.assign(foci.size(), 1.0 / static_cast<double>(foci.size()));
    }

    PointSet demand;
    if (j.contains("demand")) {
        demand = parse_points(j["demand"], "demand", dim);
    } else if (j.contains("demand_csv")) {
        if (!j["demand_csv"].is_string()) fail("demand_csv", "must be a path string");
        demand = parse_csv_points(base_dir + "/" + j["demand_csv"].get<std::string>(), dim);
    } else {
        fail("demand", "is required (inline or via demand_csv)");
    }

    ParsedInstance out{Instance(std::move(demand), std::move(foci), std::move(weights), std::move(norm)),
                       std::nullopt, std::nullopt};

    if (j.contains("lambda")) {
        const auto& l = j["lambda"];
        if (!l.is_array() || l.size() != out.instance.k()) fail("lambda", "must list one weight per focus");
        Vec lambda;
        for (const auto& x : l) {
            if (!x.is_number()) fail("lambda", "has a non-numeric entry");
            lambda.push_back(x.get<double>());
        }
        try {
            out.ordered.emplace(std::move(lambda));
        } catch (const std::invalid_argument& e) {
            fail("lambda", e.what());
        }
    }
    if (j.contains("candidates")) out.candidates = parse_points(j["candidates"], "candidates", dim);
    return out;
}

ParsedInstance parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("instance file: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string dir = ".";
    if (const auto slash = path.find_last_of('/'); slash != std::string::npos)
        dir = path.substr(0, slash);
    return parse_instance_text(ss.str(), dir);
}

std::string serialize_instance(const Instance& inst, const OrderedSpec* ordered,
                               const PointSet* candidates) {
    json j;
    j["v"] = 1;
    j["dim"] = inst.dim();
    if (inst.norm().kind() == NormSpec::Kind::Lp) {
        if (inst.norm().p() == NormSpec::kInfinity) j["norm"]["lp"] = "inf";
        else j["norm"]["lp"] = inst.norm().p();
    } else {
        json ball = json::array();
        const PointSet& b = inst.norm().ball_extremes();
        for (std::size_t i = 0; i < b.size(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < b.dim(); ++c) row.push_back(b(i, c));
            ball.push_back(row);
        }
        j["norm"]["block"] = ball;
        if (b.dim() != 2) {
            json polar = json::array();
            const PointSet& p = inst.norm().polar_extremes();
            for (std::size_t i = 0; i < p.size(); ++i) {
                json row = json::array();
                for (std::size_t c = 0; c < p.dim(); ++c) row.push_back(p(i, c));
                polar.push_back(row);
            }
            j["norm"]["polar"] = polar;
        }
    }
    auto points_json = [](const PointSet& pts) {
        json arr = json::array();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < pts.dim(); ++c) row.push_back(pts(i, c));
            arr.push_back(row);
        }
        return arr;
    };
    j["foci"] = points_json(inst.foci());
    j["foci_weights"] = inst.foci_weights();
    j["demand"] = points_json(inst.demand());
    if (ordered) j["lambda"] = ordered->lambda();
    if (candidates) j["candidates"] = points_json(*candidates);
    return j.dump(2) + "\n";
}

Instance generate_instance(std::size_t n, std::size_t k, std::size_t d, const NormSpec& norm,
                           std::uint64_t seed, bool weighted, bool foci_from_demand) {
    if (n == 0 || k == 0 || d == 0) throw std::invalid_argument("generate_instance: n, k, d must be positive");
    if (foci_from_demand && n < k)
        throw std::invalid_argument("generate_instance: need n >= k to draw foci from the demand set");
    Rng rng(seed);
    PointSet demand(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) demand(i, c) = 100.0 * rng.uniform01();

    PointSet foci(0, d);
    if (foci_from_demand) {
        for (std::size_t i : rng.sample_without_replacement(n, k)) foci.push_back(demand.row(i));
    } else {
        Vec row(d);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t c = 0; c < d; ++c) row[c] = 100.0 * rng.uniform01();
            foci.push_back(row);
        }
    }

    Vec w(k, 1.0 / static_cast<double>(k));
    if (weighted) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = 0.05 + rng.uniform01();
            s += w[i];
        }
        for (double& x : w) x /= s;
    }
    return Instance(std::move(demand), std::move(foci), std::move(w), norm);
}

NormSpec norm_by_name(const std::string& name) {
    if (name == "l1") return NormSpec::lp(1.0);
    if (name == "l2") return NormSpec::lp(2.0);
    if (name == "l3") return NormSpec::lp(3.0);
    if (name == "l4") return NormSpec::lp(4.0);
    if (name == "l1.5" || name == "l3/2") return NormSpec::lp(1.5);
    if (name == "linf") return NormSpec::lp(NormSpec::kInfinity);
    if (name == "hex") {
        PointSet ball(0, 2);
        ball.push_back(Vec{2.0, 0.0});
        ball.push_back(Vec{1.0, 2.0});
        ball.push_back(Vec{-1.0, 2.0});
        return NormSpec::block(ball);
    }
    if (name.size() > 1 && name[0] == 'l') {
        try {
            return NormSpec::lp(std::stod(name.substr(1)));
        } catch (...) {
        }
    }
    throw std::invalid_argument("unknown norm name '" + name + "' (expected l<p>, linf or hex)");
}

}  // namespace polyel
