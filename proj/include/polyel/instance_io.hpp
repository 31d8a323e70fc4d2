#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "polyel/model.hpp"
#include "polyel/ordered_median.hpp"

namespace polyel {

struct ParsedInstance {
    Instance instance;
    std::optional<OrderedSpec> ordered;
    std::optional<PointSet> candidates;
};

/// Loads and validates an instance file. Schema (version field "v": 1):
///   {"v": 1, "dim": d,
///    "norm": {"lp": p} | {"lp": "inf"} | {"block": [[...], ...]},
///    "foci": [[...], ...], "foci_weights": [...],
///    "demand": [[...], ...] or "demand_csv": "points.csv",
///    "lambda": [...] (optional), "candidates": [[...], ...] (optional)}
/// CSV paths resolve relative to the instance file. Errors name the
/// offending field; weights must sum to 1 within 1e-6.
ParsedInstance parse_instance(const std::string& path);

ParsedInstance parse_instance_text(const std::string& text, const std::string& base_dir = ".");

std::string serialize_instance(const Instance& inst, const OrderedSpec* ordered = nullptr,
                               const PointSet* candidates = nullptr);

/// Seeded random instance following the experimental protocol: demand
/// uniform in [0,100]^d, foci drawn without replacement from the demand
/// rows, weights uniform-then-normalized (weighted mode) or exactly 1/k.
Instance generate_instance(std::size_t n, std::size_t k, std::size_t d, const NormSpec& norm,
                           std::uint64_t seed, bool weighted = false, bool foci_from_demand = true);

/// Norm lookup by CLI name: l1, l2, l3, l1.5, linf, hex (the hexagonal block
/// norm with ball extremes {(2,0),(1,2),(-1,2)} and their negatives).
NormSpec norm_by_name(const std::string& name);

}  // namespace polyel
