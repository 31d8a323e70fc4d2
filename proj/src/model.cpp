#include "polyel/model.hpp"

#include <cmath>
#include <stdexcept>

#include "polyel/minimax.hpp"

namespace polyel {

namespace {

void require_finite(const PointSet& pts, const char* what) {
    for (double c : pts.flat())
        if (!std::isfinite(c)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

}  // namespace

Instance::Instance(PointSet demand, PointSet foci, Vec foci_weights, NormSpec norm)
    : demand_(std::move(demand)), foci_(std::move(foci)), weights_(std::move(foci_weights)), norm_(std::move(norm)) {
    if (demand_.empty()) throw std::invalid_argument("instance: need at least one demand point");
    if (foci_.empty()) throw std::invalid_argument("instance: need at least one focus");
    if (demand_.dim() != foci_.dim()) throw std::invalid_argument("instance: demand/foci dimension mismatch");
    if (norm_.dim() != 0 && norm_.dim() != demand_.dim())
        throw std::invalid_argument("instance: norm dimension does not match the points");
    if (weights_.size() != foci_.size()) throw std::invalid_argument("instance: foci_weights size mismatch");
    require_finite(demand_, "instance demand");
    require_finite(foci_, "instance foci");
    double s = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::invalid_argument("instance: foci weights must be strictly positive");
        s += w;
    }
    if (std::abs(s - 1.0) > 1e-6)
        throw std::invalid_argument("instance: foci weights must sum to 1 (within 1e-6)");
    for (double& w : weights_) w /= s;
}

Vec Instance::foci_mean() const {
    Vec m(dim(), 0.0);
    for (std::size_t i = 0; i < k(); ++i) axpy(weights_[i], foci_.row(i), m);
    return m;
}

double Instance::data_diameter() const {
    // Bounding box of all difference points a - u, the set the solvers roam.
    PointSet diffs(0, dim());
    Vec t(dim());
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < k(); ++j) {
            for (std::size_t c = 0; c < dim(); ++c) t[c] = demand_(i, c) - foci_(j, c);
            diffs.push_back(t);
        }
    double diam = diffs.bbox_diameter();
    return diam > 0.0 ? diam : 1.0;
}

Instance Instance::restricted_to(const std::vector<std::size_t>& demand_indices) const {
    if (demand_indices.empty()) throw std::invalid_argument("restricted_to: empty demand subset");
    PointSet sub(0, dim());
    for (std::size_t i : demand_indices) {
        if (i >= n()) throw std::out_of_range("restricted_to: demand index out of range");
        sub.push_back(demand_.row(i));
    }
    return Instance(std::move(sub), foci_, weights_, norm_);
}

Instance Instance::with_foci(PointSet foci, Vec weights) const {
    return Instance(demand_, std::move(foci), std::move(weights), norm_);
}

Instance Instance::with_shifted_foci(Span shift) const {
    PointSet shifted = foci_;
    for (std::size_t i = 0; i < shifted.size(); ++i)
        for (std::size_t c = 0; c < shifted.dim(); ++c) shifted(i, c) += shift[c];
    return Instance(demand_, std::move(shifted), weights_, norm_);
}

double phi(const Instance& inst, Span x, std::size_t a_index) {
    if (a_index >= inst.n()) throw std::out_of_range("phi: demand index out of range");
    const std::size_t d = inst.dim();
    Vec v(d);
    double s = 0.0;
    Span a = inst.demand().row(a_index);
    for (std::size_t j = 0; j < inst.k(); ++j) {
        Span u = inst.foci().row(j);
        for (std::size_t c = 0; c < d; ++c) v[c] = a[c] - u[c] - x[c];
        s += inst.foci_weights()[j] * inst.norm().eval(v);
    }
    return s;
}

std::pair<double, std::size_t> objective(const Instance& inst, Span x) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        const double v = phi(inst, x, i);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return {best, arg};
}

std::vector<std::size_t> support_set(const Instance& inst, Span x, double r) {
    std::vector<std::size_t> s;
    const double band = r * (1.0 - 1e-6);
    for (std::size_t i = 0; i < inst.n(); ++i)
        if (phi(inst, x, i) >= band) s.push_back(i);
    return s;
}

bool translate_invariance_check(const Instance& inst, Span shift) {
    SolverConfig cfg;
    cfg.tol_r = 1e-9;
    const Solution base = solve_direct(inst, cfg);
    const Solution moved = solve_direct(inst.with_shifted_foci(shift), cfg);
    const double scale = std::max(1.0, base.r);
    if (std::abs(base.r - moved.r) > 1e-6 * scale) return false;
    if (inst.norm().strictly_convex()) {
        Vec expect = base.x;
        for (std::size_t c = 0; c < expect.size(); ++c) expect[c] -= shift[c];
        if (dist2(expect, moved.x) > 1e-4 * std::max(1.0, inst.data_diameter())) return false;
    }
    return true;
}

}  // namespace polyel
