#pragma once

#include <utility>

#include "polyel/vec.hpp"

namespace polyel {

struct Interval1D {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;

    bool contains(double z, double tol = 1e-9) const {
        return !empty && z >= lo - tol && z <= hi + tol;
    }
    double length() const { return empty ? 0.0 : hi - lo; }
};

/// Sublevel interval {z : sum_u w_u |z - u| <= r} of a one-dimensional
/// polyellipsoid: empty below the weighted-median value, the median interval
/// at it, and the closed interval with endpoints on the outer linear pieces
/// above it. Foci are sorted internally; weights are normalized.
Interval1D polyellipse_interval(Vec foci, Vec weights, double r);

/// Weighted-median value (the smallest nonempty level) and the median
/// interval of sum_u w_u |z - u|.
std::pair<double, Interval1D> weber_1d(Vec foci, Vec weights);

struct Solve1DResult {
    double x = 0.0;
    double r = 0.0;
    bool explicit_branch = false;  // closed-form branch (interval endpoints
                                   // outside the foci span) vs pair search
};

/// Exact minimum covering level and translation on the line. When the
/// interval at the optimum has slack the midpoint translation is returned.
Solve1DResult solve_1d(Vec demand, Vec foci, Vec weights);

}  // namespace polyel
