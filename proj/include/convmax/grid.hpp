#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "convmax/errors.hpp"

namespace convmax {

/// Uniform cell-centered grid over the box [-half_width, half_width]^dim,
/// dim in {1, 2}.  Cell i along an axis is centered at
/// -half_width + (i + 1/2) * cell_width.  The linear index runs x-fastest:
/// idx = iy * points_per_axis + ix.
class Grid {
public:
    Grid(int dim, double half_width, int points_per_axis)
        : dim_(dim), half_width_(half_width), points_(points_per_axis) {
        if (dim != 1 && dim != 2)
            throw domain_error("Grid: dim must be 1 or 2, got " + std::to_string(dim));
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw domain_error("Grid: half_width must be positive and finite");
        if (points_per_axis < 8)
            throw domain_error("Grid: points_per_axis must be at least 8, got " +
                               std::to_string(points_per_axis));
    }

    int dim() const { return dim_; }
    double half_width() const { return half_width_; }
    int points_per_axis() const { return points_; }

    double cell_width() const { return 2.0 * half_width_ / points_; }
    double cell_measure() const {
        const double h = cell_width();
        return dim_ == 1 ? h : h * h;
    }

    std::size_t cell_count() const {
        const std::size_t n = static_cast<std::size_t>(points_);
        return dim_ == 1 ? n : n * n;
    }

    double axis_center(int i) const { return -half_width_ + (i + 0.5) * cell_width(); }

    /// Cell center; y component is 0 in one dimension.
    std::array<double, 2> center(std::size_t idx) const {
        const std::size_t n = static_cast<std::size_t>(points_);
        if (dim_ == 1) return {axis_center(static_cast<int>(idx)), 0.0};
        return {axis_center(static_cast<int>(idx % n)), axis_center(static_cast<int>(idx / n))};
    }

    double center_radius(std::size_t idx) const {
        const auto c = center(idx);
        return dim_ == 1 ? std::abs(c[0]) : std::hypot(c[0], c[1]);
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.dim_ == b.dim_ && a.half_width_ == b.half_width_ && a.points_ == b.points_;
    }
    friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

private:
    int dim_;
    double half_width_;
    int points_;
};

/// Real-valued samples on a grid, one value per cell.  Values may be signed;
/// every entry must be finite.  Immutable after construction.
class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.cell_count())
            throw domain_error("SampledFunction: expected " + std::to_string(grid_.cell_count()) +
                               " values, got " + std::to_string(values_.size()));
        for (double v : values_)
            if (!std::isfinite(v))
                throw domain_error("SampledFunction: values must be finite");
    }

    static SampledFunction zeros(const Grid& grid) {
        return SampledFunction(grid, std::vector<double>(grid.cell_count(), 0.0));
    }

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool is_zero() const {
        for (double v : values_)
            if (v != 0.0) return false;
        return true;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Evaluates fn at every cell center.
template <typename Fn>
SampledFunction sample(const Grid& grid, Fn&& fn) {
    std::vector<double> v(grid.cell_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = grid.center(i);
        if (grid.dim() == 1)
            v[i] = fn(c[0]);
        else
            v[i] = fn(c[0], c[1]);
    }
    return SampledFunction(grid, std::move(v));
}

/// Midpoint-rule L_p norm: (sum |v|^p * cell_measure)^(1/p), p >= 1.
inline double lp_norm(const SampledFunction& f, double p) {
    if (!(p >= 1.0))
        throw domain_error("lp_norm: requires p >= 1, got p = " + std::to_string(p));
    const double mu = f.grid().cell_measure();
    double acc = 0.0;
    if (p == 1.0) {
        for (double v : f.values()) acc += std::abs(v);
        return acc * mu;
    }
    if (p == 2.0) {
        for (double v : f.values()) acc += v * v;
        return std::sqrt(acc * mu);
    }
    for (double v : f.values()) acc += std::pow(std::abs(v), p);
    return std::pow(acc * mu, 1.0 / p);
}

inline double max_abs(const SampledFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline void require_same_grid(const SampledFunction& a, const SampledFunction& b,
                              const char* where) {
    if (a.grid() != b.grid())
        throw grid_mismatch_error(std::string(where) + ": operands live on different grids");
}

/// Cellwise combination of two functions on the same grid.
template <typename Fn>
SampledFunction combine(const SampledFunction& a, const SampledFunction& b, Fn&& fn) {
    require_same_grid(a, b, "combine");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(a[i], b[i]);
    return SampledFunction(a.grid(), std::move(v));
}

template <typename Fn>
SampledFunction map(const SampledFunction& a, Fn&& fn) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(a[i]);
    return SampledFunction(a.grid(), std::move(v));
}

inline SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}
inline SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}
inline SampledFunction operator*(double c, const SampledFunction& a) {
    return map(a, [c](double x) { return c * x; });
}

} // namespace convmax
