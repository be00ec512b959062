#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "convmax/exponents.hpp"
#include "convmax/hls_constant.hpp"
#include "convmax/tails.hpp"

namespace convmax {

/// u = k where |k| > M, else 0: the high-level part.
inline SampledFunction level_cut_above(const SampledFunction& k, double m) {
    if (!(m > 0.0)) throw domain_error("level_cut_above: requires M > 0");
    return map(k, [m](double v) { return std::abs(v) > m ? v : 0.0; });
}

/// w = v where 0 < |v| < delta_level, else 0: the low-level part.
inline SampledFunction level_cut_below(const SampledFunction& v, double delta_level) {
    if (!(delta_level > 0.0)) throw domain_error("level_cut_below: requires delta_level > 0");
    return map(v, [delta_level](double x) {
        const double a = std::abs(x);
        return (a > 0.0 && a < delta_level) ? x : 0.0;
    });
}

struct Thresholds {
    double level_m = 0.0;     // M: values above it go to u
    double delta_level = 0.0; // values of v below it go to w
    double radius_r = 0.0;    // y outside this radius goes to z
};

/// Four-part split k = u + w + z + core with the bookkeeping thresholds and
/// the certified per-part operator-norm budget.
struct Decomposition {
    SampledFunction u;    // high levels, small weak q-norm
    SampledFunction w;    // low levels of v = k - u, small weak q-norm
    SampledFunction z;    // far field of y = v - w, small strong q-norm
    SampledFunction core; // bounded, compactly supported remainder
    double level_m = 0.0;
    double delta_level = 0.0;
    double radius_r = 0.0;
    double eps = 0.0;
    double bound_u = 0.0;
    double bound_w = 0.0;
    double bound_z = 0.0;
    double bound_total = 0.0; // (2C + 1) eps
};

namespace detail {

/// Distinct positive |values| (ascending) with the exact distribution
/// function at each: measure_above[i] = |{ |v| > values[i] }|.
struct ValueDistribution {
    std::vector<double> values;
    std::vector<double> measure_above;
    double support_measure = 0.0;

    /// sup of lambda^q d(lambda) over the open gap below values[j]
    /// (gap j spans (values[j-1], values[j]), gap 0 spans (0, values[0])).
    double gap_product(std::size_t j, double q) const {
        const double d = j == 0 ? support_measure : measure_above[j - 1];
        return std::pow(values[j], q) * d;
    }
};

inline ValueDistribution value_distribution(const SampledFunction& f) {
    const double mu = f.grid().cell_measure();
    std::vector<double> a;
    a.reserve(f.size());
    for (double v : f.values())
        if (v != 0.0) a.push_back(std::abs(v));
    std::sort(a.begin(), a.end());
    ValueDistribution out;
    out.support_measure = static_cast<double>(a.size()) * mu;
    std::size_t i = 0;
    while (i < a.size()) {
        std::size_t j = i;
        while (j < a.size() && a[j] == a[i]) ++j;
        out.values.push_back(a[i]);
        out.measure_above.push_back(static_cast<double>(a.size() - j) * mu);
        i = j;
    }
    return out;
}

/// Candidate thresholds: geometric ladder over the sampled value range,
/// 64 points per decade, merged with the distinct sample values themselves
/// (the ladder alone cannot resolve thresholds close to the extremes).
inline std::vector<double> threshold_candidates(const ValueDistribution& dist,
                                                int points_per_decade = 64) {
    std::vector<double> cand = geometric_ladder(dist.values.front(), dist.values.back(),
                                                points_per_decade);
    cand.insert(cand.end(), dist.values.begin(), dist.values.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return cand;
}

} // namespace detail

/// Picks (M, delta_level, R) for the target eps:
///   M: smallest candidate level with  sup_{lambda > M} lambda^q d_k(lambda) < (eps/C)^q,
///   delta_level: largest candidate with  sup_{lambda < delta} lambda^q d_v(lambda) < (eps/C)^q,
///   R: smallest cell radius with  integral of |y|^q over |x| > R below eps^q.
/// The suprema are evaluated exactly from the sample value gaps.  Requires a
/// `member` tail verdict for k at grid scale; otherwise the construction
/// cannot be certified at this resolution and the call is infeasible.
inline Thresholds choose_thresholds(const SampledFunction& k, const ExponentTriple& trip,
                                    double eps, const HlsConstant& c = {}) {
    if (!(eps > 0.0)) throw domain_error("choose_thresholds: requires eps > 0");
    if (k.is_zero()) throw degenerate_error("choose_thresholds: kernel is identically zero");
    const double q = trip.q();
    const auto verdict = tail_diagnostics(k, q).verdict;
    if (verdict != TailVerdict::member)
        throw infeasible_error(std::string("choose_thresholds: kernel tail verdict is '") +
                               to_string(verdict) +
                               "'; no admissible level threshold exists at this grid resolution");
    const double budget = std::pow(eps / c.value, q);

    Thresholds th;
    { // M scan: suffix maxima of the gap products.
        const auto dist = detail::value_distribution(k);
        const std::size_t m = dist.values.size();
        std::vector<double> suffix(m + 1, 0.0);
        for (std::size_t j = m; j-- > 0;)
            suffix[j] = std::max(suffix[j + 1], dist.gap_product(j, q));
        bool found = false;
        for (double cand : detail::threshold_candidates(dist)) {
            // First gap entirely above cand.
            const std::size_t j = static_cast<std::size_t>(
                std::upper_bound(dist.values.begin(), dist.values.end(), cand) -
                dist.values.begin());
            if (suffix[j] < budget) {
                th.level_m = cand;
                found = true;
                break;
            }
        }
        if (!found)
            throw infeasible_error("choose_thresholds: no admissible M on the grid");
    }

    const SampledFunction v = map(k, [m = th.level_m](double x) {
        return std::abs(x) > m ? 0.0 : x;
    });
    if (v.is_zero()) {
        th.delta_level = th.level_m; // everything went to u; w and z are empty
        th.radius_r = 0.0;
        return th;
    }
    { // delta scan: prefix maxima plus the partial-gap term.
        const auto dist = detail::value_distribution(v);
        auto sup_below = [&](double delta) {
            double s = 0.0;
            for (std::size_t j = 0; j < dist.values.size(); ++j) {
                if (dist.values[j] <= delta) {
                    s = std::max(s, dist.gap_product(j, q));
                } else {
                    const double d = j == 0 ? dist.support_measure : dist.measure_above[j - 1];
                    s = std::max(s, std::pow(delta, q) * d);
                    break;
                }
            }
            return s;
        };
        auto cand = detail::threshold_candidates(dist);
        // Largest delta inside each gap that keeps the partial term under
        // budget; covers budgets smaller than every gap product.
        for (std::size_t j = 0; j < dist.values.size(); ++j) {
            const double d = j == 0 ? dist.support_measure : dist.measure_above[j - 1];
            if (d > 0.0)
                cand.push_back(std::min(dist.values[j], std::pow(budget / d, 1.0 / q)) *
                               (1.0 - 1e-12));
        }
        std::sort(cand.begin(), cand.end());
        bool found = false;
        for (std::size_t i = cand.size(); i-- > 0;) {
            if (!(cand[i] > 0.0) || cand[i] > dist.values.back()) continue;
            if (sup_below(cand[i]) < budget) {
                th.delta_level = cand[i];
                found = true;
                break;
            }
        }
        if (!found)
            throw infeasible_error("choose_thresholds: no admissible delta_level on the grid");
    }
    { // R scan: exact quadrature of the far-field q-mass of y = v - w.
        const SampledFunction y = map(v, [d = th.delta_level](double x) {
            const double a = std::abs(x);
            return (a > 0.0 && a < d) ? 0.0 : x;
        });
        const Grid& g = y.grid();
        const double mu = g.cell_measure();
        std::vector<std::pair<double, double>> cells; // (radius, |y|^q mass)
        cells.reserve(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] != 0.0)
                cells.emplace_back(g.center_radius(i), std::pow(std::abs(y[i]), q) * mu);
        std::sort(cells.begin(), cells.end());
        const double target = std::pow(eps, q);
        double tail = 0.0;
        th.radius_r = cells.empty() ? 0.0 : cells.back().first;
        for (std::size_t i = cells.size(); i-- > 0;) {
            // tail currently holds the mass strictly beyond cells[i].first
            // once equal radii are grouped; group first.
            std::size_t j = i;
            double group = cells[i].second;
            while (j > 0 && cells[j - 1].first == cells[i].first) {
                --j;
                group += cells[j].second;
            }
            if (tail < target)
                th.radius_r = cells[i].first;
            else
                break;
            tail += group;
            i = j; // skip the rest of the radius group (loop decrements once more)
        }
        if (cells.empty()) th.radius_r = 0.0;
    }
    return th;
}

/// Runs the full split at the chosen thresholds.  Reconstruction
/// u + w + z + core = k is exact cellwise because the four parts have
/// pairwise disjoint supports within each split stage.
inline Decomposition decompose(const SampledFunction& k, const ExponentTriple& trip, double eps,
                               const HlsConstant& c = {}) {
    const Thresholds th = choose_thresholds(k, trip, eps, c);
    const SampledFunction u = map(k, [m = th.level_m](double x) {
        return std::abs(x) > m ? x : 0.0;
    });
    const SampledFunction v = k - u;
    const SampledFunction w = map(v, [d = th.delta_level](double x) {
        const double a = std::abs(x);
        return (a > 0.0 && a < d) ? x : 0.0;
    });
    const SampledFunction y = v - w;
    const Grid& g = k.grid();
    std::vector<double> zv(k.size(), 0.0), corev(k.size(), 0.0);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (g.center_radius(i) > th.radius_r)
            zv[i] = y[i];
        else
            corev[i] = y[i];
    }
    Decomposition out{u,
                      w,
                      SampledFunction(g, std::move(zv)),
                      SampledFunction(g, std::move(corev)),
                      th.level_m,
                      th.delta_level,
                      th.radius_r,
                      eps,
                      c.value * eps,
                      c.value * eps,
                      eps,
                      (2.0 * c.value + 1.0) * eps};
    return out;
}

/// Conditions on the core: bounded by M + delta_level and vanishing outside
/// the ball of radius R.
inline bool verify_core(const SampledFunction& core, double level_m, double delta_level,
                        double radius_r) {
    const Grid& g = core.grid();
    for (std::size_t i = 0; i < core.size(); ++i) {
        if (std::abs(core[i]) > level_m + delta_level) return false;
        if (core[i] != 0.0 && g.center_radius(i) > radius_r) return false;
    }
    return true;
}

} // namespace convmax
