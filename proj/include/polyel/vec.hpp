#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace polyel {

using Vec = std::vector<double>;
using Span = std::span<const double>;

inline double dot(Span a, Span b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(Span a) { return std::sqrt(dot(a, a)); }

inline double dist2(Span a, Span b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

// y += t * x
inline void axpy(double t, Span x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * x[i];
}

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Vec operator*(double t, const Vec& a) {
    Vec r(a);
    for (double& v : r) v *= t;
    return r;
}

/// Row-major flat storage for a list of d-dimensional points.
class PointSet {
  public:
    PointSet() = default;
    PointSet(std::size_t n, std::size_t d) : dim_(d), data_(n * d, 0.0) {}
    explicit PointSet(std::size_t d, std::vector<double> flat)
        : dim_(d), data_(std::move(flat)) {
        if (dim_ == 0 || data_.size() % dim_ != 0)
            throw std::invalid_argument("PointSet: flat size not a multiple of dim");
    }

    std::size_t size() const { return dim_ ? data_.size() / dim_ : 0; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return data_.empty(); }

    Span row(std::size_t i) const { return Span(data_.data() + i * dim_, dim_); }
    double* row_mut(std::size_t i) { return data_.data() + i * dim_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

    void push_back(Span p) {
        if (dim_ == 0) dim_ = p.size();
        if (p.size() != dim_) throw std::invalid_argument("PointSet: dimension mismatch");
        data_.insert(data_.end(), p.begin(), p.end());
    }

    Vec row_vec(std::size_t i) const {
        Span r = row(i);
        return Vec(r.begin(), r.end());
    }

    const std::vector<double>& flat() const { return data_; }

    /// Euclidean diameter bound via the bounding box (cheap, within sqrt(d) of exact).
    double bbox_diameter() const {
        if (empty()) return 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            double lo = data_[j], hi = data_[j];
            for (std::size_t i = 1; i < size(); ++i) {
                lo = std::min(lo, (*this)(i, j));
                hi = std::max(hi, (*this)(i, j));
            }
            s += (hi - lo) * (hi - lo);
        }
        return std::sqrt(s);
    }

  private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

}  // namespace polyel
