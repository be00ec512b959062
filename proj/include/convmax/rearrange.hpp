#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "convmax/grid.hpp"

namespace convmax {

/// Piecewise-constant decreasing rearrangement f*.  Level j (1-based in the
/// math, 0-based here) holds on [breakpoints[j], breakpoints[j+1]); levels are
/// strictly positive and strictly decreasing after coalescing, and every
/// breakpoint is an exact integer multiple of the cell measure.
struct StepRearrangement {
    std::vector<double> breakpoints; // size m+1, breakpoints[0] == 0
    std::vector<double> levels;      // size m
    double total_measure = 0.0;      // == breakpoints.back()

    std::size_t step_count() const { return levels.size(); }

    /// f*(t); zero beyond the support measure.
    double value_at(double t) const {
        if (t < 0.0 || levels.empty() || t >= total_measure) return t < 0.0 ? levels.front() : 0.0;
        const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - breakpoints.begin());
        return levels[j == 0 ? 0 : j - 1];
    }

    /// Measure of {f* > lambda}: the right endpoint of the last step whose
    /// level exceeds lambda.
    double measure_above(double lambda) const {
        std::size_t lo = 0, hi = levels.size();
        while (lo < hi) { // first index with level <= lambda
            const std::size_t mid = (lo + hi) / 2;
            if (levels[mid] > lambda)
                lo = mid + 1;
            else
                hi = mid;
        }
        return breakpoints[lo];
    }
};

/// d_f(lambda): cell measure times the number of cells with |value| > lambda.
inline double distribution_function(const SampledFunction& f, double lambda) {
    if (!(lambda >= 0.0)) throw domain_error("distribution_function: requires lambda >= 0");
    std::size_t count = 0;
    for (double v : f.values())
        if (std::abs(v) > lambda) ++count;
    return static_cast<double>(count) * f.grid().cell_measure();
}

namespace detail {

/// |values| sorted descending; ties keep grid-index order (stable).
inline std::vector<double> sorted_abs_descending(const SampledFunction& f) {
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f[i]);
    std::stable_sort(a.begin(), a.end(), std::greater<double>());
    return a;
}

} // namespace detail

/// Sorts |values| descending and coalesces equal levels.  Breakpoints are
/// computed as count * cell_measure so equimeasurability with the input holds
/// with exact cell counts.
inline StepRearrangement decreasing_rearrangement(const SampledFunction& f) {
    if (f.is_zero())
        throw degenerate_error("decreasing_rearrangement: input is identically zero");
    const double mu = f.grid().cell_measure();
    const auto sorted = detail::sorted_abs_descending(f);
    StepRearrangement out;
    out.breakpoints.push_back(0.0);
    std::size_t i = 0;
    while (i < sorted.size() && sorted[i] > 0.0) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        out.levels.push_back(sorted[i]);
        out.breakpoints.push_back(static_cast<double>(j) * mu);
        i = j;
    }
    out.total_measure = out.breakpoints.back();
    return out;
}

/// sup over t of t^(1/q) f*(t), attained at step right edges.
inline double weak_norm(const SampledFunction& f, double q) {
    if (!(q > 0.0)) throw domain_error("weak_norm: requires q > 0");
    if (f.is_zero()) return 0.0;
    const auto r = decreasing_rearrangement(f);
    double best = 0.0;
    for (std::size_t j = 0; j < r.step_count(); ++j)
        best = std::max(best, std::pow(r.breakpoints[j + 1], 1.0 / q) * r.levels[j]);
    return best;
}

namespace detail {

/// Exact integral of (t^(1/q) f*(t))^s dt/t over [from, to] for the step
/// rearrangement: each step contributes level^s * (q/s) * (t_hi^{s/q} - t_lo^{s/q}).
inline double lorentz_integral(const StepRearrangement& r, double q, double s, double from,
                               double to) {
    const double e = s / q;
    double acc = 0.0;
    for (std::size_t j = 0; j < r.step_count(); ++j) {
        const double lo = std::max(from, r.breakpoints[j]);
        const double hi = std::min(to, r.breakpoints[j + 1]);
        if (hi <= lo) continue;
        acc += std::pow(r.levels[j], s) * (std::pow(hi, e) - std::pow(lo, e)) / e;
    }
    return acc;
}

} // namespace detail

/// Lorentz quasi-norm ||f||_{q,s} via the exact per-step closed form.
inline double lorentz_norm(const SampledFunction& f, double q, double s) {
    if (!(q > 0.0)) throw domain_error("lorentz_norm: requires q > 0");
    if (!(s > 0.0) || !std::isfinite(s))
        throw domain_error("lorentz_norm: requires 0 < s < infinity");
    if (f.is_zero()) return 0.0;
    const auto r = decreasing_rearrangement(f);
    return std::pow(detail::lorentz_integral(r, q, s, 0.0, r.total_measure), 1.0 / s);
}

namespace detail {

/// Cell indices ordered by distance of the cell center from the origin,
/// ties broken lexicographically by (x, y).  The discrete symmetrization
/// fills cells in this order.
inline std::vector<std::size_t> radial_fill_order(const Grid& g) {
    std::vector<std::size_t> idx(g.cell_count());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> rad(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) rad[i] = g.center_radius(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (rad[a] != rad[b]) return rad[a] < rad[b];
        const auto ca = g.center(a), cb = g.center(b);
        if (ca[0] != cb[0]) return ca[0] < cb[0];
        return ca[1] < cb[1];
    });
    return idx;
}

} // namespace detail

/// Discrete Schwarz symmetrization: |values| sorted descending, placed into
/// cells of increasing center radius.  Equimeasurable with |f| as a multiset.
inline SampledFunction symmetric_decreasing(const SampledFunction& f) {
    const auto order = detail::radial_fill_order(f.grid());
    const auto sorted = detail::sorted_abs_descending(f);
    std::vector<double> v(f.size(), 0.0);
    for (std::size_t rank = 0; rank < sorted.size(); ++rank) v[order[rank]] = sorted[rank];
    return SampledFunction(f.grid(), std::move(v));
}

} // namespace convmax
