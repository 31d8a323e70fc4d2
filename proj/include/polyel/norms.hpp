#pragma once

#include <memory>
#include <string>

#include "polyel/vec.hpp"

namespace polyel {

/// Distance gauge: an lp norm (1 <= p <= inf) or a block norm given by the
/// extreme points of its unit ball. Block norms are evaluated through the
/// extreme points of the polar ball, ||v|| = max_e e.v, which also drives
/// their linearization, subgradients and smoothing.
///
/// Immutable after construction; all operations are pure and safe to share
/// across concurrent solver runs.
class NormSpec {
  public:
    enum class Kind { Lp, Block };

    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    /// lp norm, p >= 1; pass kInfinity (or std::numeric_limits::infinity)
    /// for the max norm.
    static NormSpec lp(double p);

    /// Block norm in d = 2 from unit-ball extreme points; the symmetric
    /// halves are auto-completed and the polar extremes derived.
    static NormSpec block(const PointSet& ball_extremes);

    /// Block norm in any dimension with user-supplied polar extremes.
    static NormSpec block_with_polar(const PointSet& ball_extremes, const PointSet& polar_extremes);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    bool strictly_convex() const { return strictly_convex_; }

    /// 0 when the norm applies to any dimension (lp); fixed otherwise.
    std::size_t dim() const { return dim_; }

    const PointSet& ball_extremes() const { return ball_; }
    const PointSet& polar_extremes() const { return polar_; }

    /// ||v||.
    double eval(Span v) const;

    /// Some g with g.v = ||v|| and dual norm of g <= 1; zero vector at v = 0.
    /// Kink ties (lp at a zero coordinate, block/linf argmax) resolve to the
    /// deterministic selection documented in the implementation.
    Vec subgradient(Span v) const;

    /// Differentiable upper bound of ||v|| with O(mu) error:
    /// lp composes sqrt(v_j^2 + mu^2) componentwise; block (and p = inf) uses
    /// mu * logsumexp(e.v / mu) over the polar extremes. Writes the gradient
    /// into `grad` (size d) and returns the value.
    double smoothed(Span v, double mu, double* grad) const;

    /// Uniform bound on smoothed(v, mu) - eval(v), divided by mu; depends
    /// only on the dimension / polar extreme count.
    double smoothing_constant(std::size_t d) const;

    std::string describe() const;

  private:
    NormSpec() = default;
    void check_dim(Span v) const;

    Kind kind_ = Kind::Lp;
    double p_ = 2.0;
    bool strictly_convex_ = true;
    std::size_t dim_ = 0;
    PointSet ball_;
    PointSet polar_;
};

/// Polar-ball extreme points of a planar block norm: ball extremes sorted by
/// angle, each adjacent pair (b_i, b_{i+1}) contributes the solution e of
/// e.b_i = 1, e.b_{i+1} = 1. Throws on degenerate (origin-collinear) pairs.
PointSet derive_polar_extremes(const PointSet& ball_extremes);

}  // namespace polyel
