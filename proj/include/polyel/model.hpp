#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "polyel/norms.hpp"
#include "polyel/vec.hpp"

namespace polyel {

/// A covering instance: demand points, foci (relative positions only; the
/// solvers optimize their common translation), normalized foci weights and
/// the distance gauge.
///
/// Immutable value object; operations on it are pure.
class Instance {
  public:
    Instance(PointSet demand, PointSet foci, Vec foci_weights, NormSpec norm);

    const PointSet& demand() const { return demand_; }
    const PointSet& foci() const { return foci_; }
    const Vec& foci_weights() const { return weights_; }
    const NormSpec& norm() const { return norm_; }

    std::size_t n() const { return demand_.size(); }
    std::size_t k() const { return foci_.size(); }
    std::size_t dim() const { return demand_.dim(); }

    /// Weighted centroid of the foci.
    Vec foci_mean() const;

    /// Bounding-box diameter of demand united with the reflected foci span;
    /// the natural scale for smoothing schedules and step sizes.
    double data_diameter() const;

    Instance restricted_to(const std::vector<std::size_t>& demand_indices) const;
    Instance with_foci(PointSet foci, Vec weights) const;
    Instance with_shifted_foci(Span shift) const;

  private:
    PointSet demand_;
    PointSet foci_;
    Vec weights_;
    NormSpec norm_;
};

struct Solution {
    Vec x;                   // optimal translation
    double r = 0.0;          // covering radius, always the exact max of phi at x
    std::vector<std::size_t> support;  // demand indices with phi >= r (1 - 1e-6)
    std::size_t iterations = 0;
    std::size_t inner_solves = 0;
    bool converged = false;
    double residual = 0.0;   // solver's own optimality estimate (diagnostic)
};

struct DualCertificate {
    Vec alpha;               // point on the demand simplex
    double dual_value = 0.0; // certified lower bound on the optimal radius
    std::vector<double> recorded_values;  // certified bound at every outer iterate
};

/// phi(x; a) = sum_u w_u ||a - u - x||: the level of the translated
/// polyellipsoid through demand point a.
double phi(const Instance& inst, Span x, std::size_t a_index);

/// max_a phi(x; a) and the smallest attaining index.
std::pair<double, std::size_t> objective(const Instance& inst, Span x);

/// Support set at translation x and radius r under the relative band
/// phi >= r (1 - 1e-6).
std::vector<std::size_t> support_set(const Instance& inst, Span x, double r);

/// Solves the instance twice (foci as given, foci shifted) and reports
/// whether the radius is invariant and, for strictly convex norms, whether
/// the optimal translation moved by -shift.
bool translate_invariance_check(const Instance& inst, Span shift);

}  // namespace polyel
