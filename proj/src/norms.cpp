#include "polyel/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace polyel {

namespace {

constexpr double kPairTol = 1e-10;

/// Completes v -> -v pairs that the caller omitted and drops exact duplicates.
PointSet symmetrize(const PointSet& pts) {
    const std::size_t d = pts.dim();
    PointSet out(0, d);
    auto contains = [&](Span q) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (dist2(out.row(i), q) <= 1e-14) return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!contains(pts.row(i))) out.push_back(pts.row(i));
        Vec neg = pts.row_vec(i);
        for (double& c : neg) c = -c;
        if (!contains(neg)) out.push_back(neg);
    }
    return out;
}

void validate_ball_extremes_2d(const PointSet& ball) {
    if (ball.size() < 4) throw std::invalid_argument("block norm: need at least 4 extreme points (2 antipodal pairs)");
    // Must span the plane.
    bool spans = false;
    for (std::size_t i = 1; i < ball.size() && !spans; ++i) {
        const double cr = ball(0, 0) * ball(i, 1) - ball(0, 1) * ball(i, 0);
        if (std::abs(cr) > 1e-12) spans = true;
    }
    if (!spans) throw std::invalid_argument("block norm: extreme points are collinear with the origin");
}

}  // namespace

NormSpec NormSpec::lp(double pval) {
    if (!(pval >= 1.0)) throw std::invalid_argument("lp norm requires p >= 1");
    NormSpec n;
    n.kind_ = Kind::Lp;
    n.p_ = pval;
    n.strictly_convex_ = std::isfinite(pval) && pval > 1.0;
    n.dim_ = 0;
    return n;
}

NormSpec NormSpec::block(const PointSet& ball_extremes) {
    if (ball_extremes.dim() != 2)
        throw std::invalid_argument("block norm: polar extremes must be supplied explicitly for d != 2");
    PointSet ball = symmetrize(ball_extremes);
    validate_ball_extremes_2d(ball);
    return block_with_polar(ball, derive_polar_extremes(ball));
}

NormSpec NormSpec::block_with_polar(const PointSet& ball_extremes, const PointSet& polar_extremes) {
    if (ball_extremes.dim() != polar_extremes.dim())
        throw std::invalid_argument("block norm: ball/polar dimension mismatch");
    NormSpec n;
    n.kind_ = Kind::Block;
    n.strictly_convex_ = false;
    n.dim_ = ball_extremes.dim();
    n.ball_ = symmetrize(ball_extremes);
    n.polar_ = symmetrize(polar_extremes);
    // Duality pairing: every ball extreme reaches value 1 against the polar
    // set and vice versa.
    for (std::size_t i = 0; i < n.ball_.size(); ++i) {
        double best = -kInfinity;
        for (std::size_t j = 0; j < n.polar_.size(); ++j) best = std::max(best, dot(n.polar_.row(j), n.ball_.row(i)));
        if (std::abs(best - 1.0) > kPairTol)
            throw std::invalid_argument("block norm: ball extreme does not attain 1 against the polar set");
    }
    for (std::size_t j = 0; j < n.polar_.size(); ++j) {
        double best = -kInfinity;
        for (std::size_t i = 0; i < n.ball_.size(); ++i) best = std::max(best, dot(n.polar_.row(j), n.ball_.row(i)));
        if (std::abs(best - 1.0) > kPairTol)
            throw std::invalid_argument("block norm: polar extreme does not attain 1 against the ball set");
    }
    return n;
}

void NormSpec::check_dim(Span v) const {
    if (dim_ != 0 && v.size() != dim_)
        throw std::invalid_argument("norm: vector dimension does not match the block norm dimension");
    if (v.empty()) throw std::invalid_argument("norm: empty vector");
}

double NormSpec::eval(Span v) const {
    check_dim(v);
    if (kind_ == Kind::Block) {
        double best = -kInfinity;
        for (std::size_t j = 0; j < polar_.size(); ++j) best = std::max(best, dot(polar_.row(j), v));
        return best;
    }
    if (p_ == kInfinity) {
        double m = 0.0;
        for (double c : v) m = std::max(m, std::abs(c));
        return m;
    }
    if (p_ == 1.0) {
        double s = 0.0;
        for (double c : v) s += std::abs(c);
        return s;
    }
    if (p_ == 2.0) return norm2(v);
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double c : v) s += std::pow(std::abs(c) / m, p_);
    return m * std::pow(s, 1.0 / p_);
}

Vec NormSpec::subgradient(Span v) const {
    check_dim(v);
    Vec g(v.size(), 0.0);
    if (kind_ == Kind::Block) {
        // Lowest-index maximizing polar extreme; any maximizer is valid.
        double best = -kInfinity;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < polar_.size(); ++j) {
            const double s = dot(polar_.row(j), v);
            if (s > best + 1e-15) {
                best = s;
                arg = j;
            }
        }
        if (best <= 0.0) return g;  // v = 0 (or interior degeneracy): zero is valid
        Span e = polar_.row(arg);
        std::copy(e.begin(), e.end(), g.begin());
        return g;
    }
    if (p_ == kInfinity) {
        double m = 0.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (std::abs(v[j]) > m) {
                m = std::abs(v[j]);
                arg = j;
            }
        }
        if (m > 0.0) g[arg] = v[arg] > 0 ? 1.0 : -1.0;
        return g;
    }
    if (p_ == 1.0) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] > 0) g[j] = 1.0;
            else if (v[j] < 0) g[j] = -1.0;
            // zero coordinate -> 0 (deterministic selection at the kink)
        }
        return g;
    }
    const double nv = eval(v);
    if (nv == 0.0) return g;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double t = std::abs(v[j]) / nv;
        g[j] = (v[j] >= 0 ? 1.0 : -1.0) * std::pow(t, p_ - 1.0);
    }
    return g;
}

double NormSpec::smoothed(Span v, double mu, double* grad) const {
    check_dim(v);
    if (!(mu > 0.0)) throw std::invalid_argument("smoothed norm: mu must be positive");
    const std::size_t d = v.size();

    auto logsumexp = [&](const PointSet& dirs) {
        double m = -kInfinity;
        for (std::size_t j = 0; j < dirs.size(); ++j) m = std::max(m, dot(dirs.row(j), v));
        double z = 0.0;
        for (std::size_t j = 0; j < dirs.size(); ++j) z += std::exp((dot(dirs.row(j), v) - m) / mu);
        if (grad) {
            std::fill(grad, grad + d, 0.0);
            for (std::size_t j = 0; j < dirs.size(); ++j) {
                const double w = std::exp((dot(dirs.row(j), v) - m) / mu) / z;
                Span e = dirs.row(j);
                for (std::size_t c = 0; c < d; ++c) grad[c] += w * e[c];
            }
        }
        return m + mu * std::log(z);
    };

    if (kind_ == Kind::Block) return logsumexp(polar_);

    if (p_ == kInfinity) {
        // Same code path as block norms: the polar extremes of the max norm
        // are the signed unit basis vectors.
        PointSet dirs(2 * d, d);
        for (std::size_t j = 0; j < d; ++j) {
            dirs(2 * j, j) = 1.0;
            dirs(2 * j + 1, j) = -1.0;
        }
        return logsumexp(dirs);
    }

    // Componentwise hyperbolic smoothing, then the p-composition.
    // s_j = sqrt(v_j^2 + mu^2) >= |v_j|, all strictly positive.
    Vec s(d);
    double smax = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        s[j] = std::sqrt(v[j] * v[j] + mu * mu);
        smax = std::max(smax, s[j]);
    }
    double val;
    if (p_ == 1.0) {
        val = 0.0;
        for (double c : s) val += c;
        if (grad)
            for (std::size_t j = 0; j < d; ++j) grad[j] = v[j] / s[j];
        return val;
    }
    if (p_ == 2.0) {
        double q = 0.0;
        for (double c : s) q += c * c;
        val = std::sqrt(q);
        if (grad)
            for (std::size_t j = 0; j < d; ++j) grad[j] = v[j] / val;
        return val;
    }
    double q = 0.0;
    for (double c : s) q += std::pow(c / smax, p_);
    val = smax * std::pow(q, 1.0 / p_);
    if (grad) {
        // d val / d v_j = val^{1-p} s_j^{p-2} v_j
        for (std::size_t j = 0; j < d; ++j)
            grad[j] = std::pow(val / smax, 1.0 - p_) * std::pow(s[j] / smax, p_ - 2.0) * (v[j] / smax);
    }
    return val;
}

double NormSpec::smoothing_constant(std::size_t d) const {
    if (kind_ == Kind::Block) return std::log(static_cast<double>(std::max<std::size_t>(polar_.size(), 2)));
    if (p_ == kInfinity) return std::log(2.0 * static_cast<double>(std::max<std::size_t>(d, 1)));
    return std::pow(static_cast<double>(std::max<std::size_t>(d, 1)), 1.0 / p_);
}

std::string NormSpec::describe() const {
    char buf[64];
    if (kind_ == Kind::Block) {
        std::snprintf(buf, sizeof(buf), "block(%zu)", ball_.size());
        return buf;
    }
    if (p_ == kInfinity) return "linf";
    std::snprintf(buf, sizeof(buf), "l%g", p_);
    return buf;
}

PointSet derive_polar_extremes(const PointSet& ball_extremes) {
    if (ball_extremes.dim() != 2)
        throw std::runtime_error("derive_polar_extremes: only d = 2 is supported; supply polar extremes for d > 2");
    PointSet ball = symmetrize(ball_extremes);
    validate_ball_extremes_2d(ball);

    std::vector<std::size_t> order(ball.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::atan2(ball(a, 1), ball(a, 0)) < std::atan2(ball(b, 1), ball(b, 0));
    });

    PointSet polar(0, 2);
    const std::size_t m = order.size();
    for (std::size_t i = 0; i < m; ++i) {
        Span b1 = ball.row(order[i]);
        Span b2 = ball.row(order[(i + 1) % m]);
        const double det = b1[0] * b2[1] - b1[1] * b2[0];
        if (std::abs(det) < 1e-12)
            throw std::invalid_argument("derive_polar_extremes: adjacent extreme points collinear with the origin");
        // Solve e.b1 = 1, e.b2 = 1.
        Vec e = {(b2[1] - b1[1]) / det, (b1[0] - b2[0]) / det};
        polar.push_back(e);
    }
    return polar;
}

}  // namespace polyel
