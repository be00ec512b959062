#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "convmax/rearrange.hpp"

namespace convmax {

/// Knobs for the grid-scale membership diagnostic.  Limits at t -> 0 and
/// t -> infinity are undecidable from finite samples; these thresholds define
/// the proxy: the tail product must fall below final_ratio * weak_norm at the
/// window end, and must decay by decay_ratio across half a window toward the
/// limit.
struct TailThresholds {
    double final_ratio = 0.1;
    double window_decades = 1.0;
    double decay_ratio = 0.75;
    int points_per_decade = 64;
    double cross_check_rel = 0.10;
};

enum class TailVerdict { member, nonmember_small_t, nonmember_large_t, inconclusive };

inline const char* to_string(TailVerdict v) {
    switch (v) {
        case TailVerdict::member: return "member";
        case TailVerdict::nonmember_small_t: return "nonmember_small_t";
        case TailVerdict::nonmember_large_t: return "nonmember_large_t";
        default: return "inconclusive";
    }
}

/// Sampled tail products near both ends.  small_t_tail / large_t_tail carry
/// (t, t^{1/q} f*(t)); the lambda forms carry (lambda, lambda^q d(lambda)) on
/// the matching value windows (lambda_form_small covers large lambda, the
/// small-t end; lambda_form_large covers small lambda).
struct TailDiagnostics {
    std::vector<std::pair<double, double>> small_t_tail;
    std::vector<std::pair<double, double>> large_t_tail;
    std::vector<std::pair<double, double>> lambda_form_small;
    std::vector<std::pair<double, double>> lambda_form_large;
    TailVerdict verdict = TailVerdict::inconclusive;
    double weak_norm_q = 0.0;
};

namespace detail {

inline std::vector<double> geometric_ladder(double lo, double hi, int points_per_decade) {
    std::vector<double> out;
    if (!(lo > 0.0) || !(hi > lo)) {
        if (lo > 0.0) out.push_back(lo);
        return out;
    }
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    out.back() = hi;
    return out;
}

struct TailEndCheck {
    bool pass = false;
    bool resolvable = false;
    double window_max = 0.0; // max tail product over the window, t-form
};

/// Checks one end of the t-ladder: products must decay toward the limit
/// (near-half max <= decay_ratio * far-half max) and the extreme product must
/// fall below final_ratio * weak_norm.  `toward_small_t` selects which end of
/// `ladder` is the limit.
inline TailEndCheck check_tail_end(const std::vector<std::pair<double, double>>& window,
                                   bool toward_small_t, double weak, const TailThresholds& cfg) {
    TailEndCheck out;
    if (window.size() < 4) return out;
    out.resolvable = true;
    const double t_lo = window.front().first, t_hi = window.back().first;
    const double t_mid = std::sqrt(t_lo * t_hi);
    double near_max = 0.0, far_max = 0.0, extreme = 0.0;
    for (const auto& [t, g] : window) {
        out.window_max = std::max(out.window_max, g);
        const bool near_limit = toward_small_t ? t <= t_mid : t >= t_mid;
        (near_limit ? near_max : far_max) = std::max(near_limit ? near_max : far_max, g);
    }
    extreme = toward_small_t ? window.front().second : window.back().second;
    const double slack = 1e-12 * std::max(1.0, weak);
    out.pass = extreme < cfg.final_ratio * weak && near_max <= cfg.decay_ratio * far_max + slack;
    return out;
}

} // namespace detail

/// Grid-scale diagnostic for membership in the vanishing-tail subclass of
/// weak L_q: evaluates t^{1/q} f*(t) on a geometric ladder spanning
/// [cell_measure, box_measure] and lambda^q d(lambda) on matched value
/// windows, and issues a verdict per the thresholds.  The two forms are
/// cross-checked; disagreement beyond cross_check_rel yields `inconclusive`.
inline TailDiagnostics tail_diagnostics(const SampledFunction& f, double q,
                                        const TailThresholds& cfg = {}) {
    if (!(q > 0.0)) throw domain_error("tail_diagnostics: requires q > 0");
    TailDiagnostics out;
    if (f.is_zero()) { // zero function trivially has vanishing tails
        out.verdict = TailVerdict::member;
        return out;
    }
    const auto r = decreasing_rearrangement(f);
    const double mu = f.grid().cell_measure();
    const double box = std::pow(2.0 * f.grid().half_width(), f.grid().dim());
    const double invq = 1.0 / q;
    for (std::size_t j = 0; j < r.step_count(); ++j)
        out.weak_norm_q =
            std::max(out.weak_norm_q, std::pow(r.breakpoints[j + 1], invq) * r.levels[j]);
    const double window = std::pow(10.0, cfg.window_decades);

    auto products_on = [&](double lo, double hi) {
        std::vector<std::pair<double, double>> pts;
        for (double t : detail::geometric_ladder(lo, hi, cfg.points_per_decade))
            pts.emplace_back(t, std::pow(t, invq) * r.value_at(t));
        return pts;
    };
    out.small_t_tail = products_on(mu, std::min(mu * window, box));
    out.large_t_tail = products_on(std::max(box / window, mu), box);

    const auto small_end = detail::check_tail_end(out.small_t_tail, true, out.weak_norm_q, cfg);
    const auto large_end = detail::check_tail_end(out.large_t_tail, false, out.weak_norm_q, cfg);

    // Value windows matched to the two t windows, recorded in the lambda form.
    const double top_level = r.levels.front();
    const double small_t_hi = out.small_t_tail.empty() ? mu : out.small_t_tail.back().first;
    const double lam_small_lo = r.value_at(std::min(small_t_hi, r.total_measure * (1 - 1e-12)));
    const double large_t_lo = out.large_t_tail.empty() ? box : out.large_t_tail.front().first;
    const double lam_large_hi =
        large_t_lo < r.total_measure ? r.value_at(large_t_lo) : r.levels.back();

    auto lambda_products = [&](double lo, double hi) {
        std::vector<std::pair<double, double>> pts;
        for (double lam : detail::geometric_ladder(lo, hi, cfg.points_per_decade))
            pts.emplace_back(lam, std::pow(lam, q) * r.measure_above(lam));
        return pts;
    };
    out.lambda_form_small = lambda_products(std::max(lam_small_lo, 1e-300), top_level);
    out.lambda_form_large = lambda_products(r.levels.back(), std::max(lam_large_hi, r.levels.back()));

    // Cross-check: the sup of t^{1/q} f*(t) and of lambda d(lambda)^{1/q}
    // over matched windows must agree where both are resolvable.
    bool cross_ok = true;
    auto check_forms = [&](const std::vector<std::pair<double, double>>& lam_pts,
                           const detail::TailEndCheck& end) {
        if (!end.resolvable || lam_pts.size() < 4 || end.window_max <= 0.0) return;
        double s_lambda = 0.0;
        for (const auto& [lam, prod] : lam_pts) s_lambda = std::max(s_lambda, std::pow(prod, invq));
        if (s_lambda <= 0.0) return;
        const double rel =
            std::abs(s_lambda - end.window_max) / std::max(s_lambda, end.window_max);
        if (rel > cfg.cross_check_rel) cross_ok = false;
    };
    check_forms(out.lambda_form_small, small_end);
    check_forms(out.lambda_form_large, large_end);

    if (!small_end.pass)
        out.verdict = TailVerdict::nonmember_small_t;
    else if (!large_end.pass)
        out.verdict = TailVerdict::nonmember_large_t;
    else
        out.verdict = TailVerdict::member;
    if (!cross_ok) out.verdict = TailVerdict::inconclusive;
    return out;
}

/// C = (q/s)(1 - 2^{-s/q}), the constant in the tail bound
/// f*(T) T^{1/q} <= (eps/C)^{1/s} for T past twice the truncation point.
inline double lorentz_inclusion_constant(double q, double s) {
    if (!(q > 0.0) || !(s > 0.0)) throw domain_error("lorentz_inclusion_constant: q, s > 0");
    return (q / s) * (1.0 - std::pow(2.0, -s / q));
}

/// Tail of the Lorentz integral: integral over [from, infinity) of
/// (t^{1/q} f*(t))^s dt/t, exact on the step rearrangement.
inline double lorentz_tail_integral(const StepRearrangement& r, double q, double s, double from) {
    return detail::lorentz_integral(r, q, s, std::max(0.0, from), r.total_measure);
}

/// Smallest T_eps with tail integral beyond T_eps strictly below eps; exact
/// closed-form solve inside the step that crosses eps.
inline double lorentz_truncation_point(const StepRearrangement& r, double q, double s,
                                       double eps) {
    if (!(eps > 0.0)) throw domain_error("lorentz_truncation_point: requires eps > 0");
    if (lorentz_tail_integral(r, q, s, 0.0) < eps) return 0.0;
    const double e = s / q;
    double tail = 0.0; // integral beyond the current right edge
    for (std::size_t j = r.step_count(); j-- > 0;) {
        const double hi = r.breakpoints[j + 1];
        const double lo = r.breakpoints[j];
        const double contrib = std::pow(r.levels[j], s) * (std::pow(hi, e) - std::pow(lo, e)) / e;
        if (tail + contrib >= eps) {
            const double te = std::pow(hi, e) - e * (eps - tail) / std::pow(r.levels[j], s);
            return std::pow(std::max(te, 0.0), 1.0 / e);
        }
        tail += contrib;
    }
    return 0.0;
}

/// Certified tail-bound margin: C (f*(T) T^{1/q})^s minus the tail integral
/// beyond the truncation point.  Nonpositive whenever T >= 2 T_eps, which is
/// enforced as a precondition.
inline double inclusion_margin(const SampledFunction& f, double q, double s, double T,
                               double eps) {
    if (!(q > 0.0) || !(s > 0.0) || !std::isfinite(s))
        throw domain_error("inclusion_margin: requires q > 0 and 0 < s < infinity");
    if (!(eps > 0.0)) throw domain_error("inclusion_margin: requires eps > 0");
    if (f.is_zero()) return 0.0;
    const auto r = decreasing_rearrangement(f);
    const double t_eps = lorentz_truncation_point(r, q, s, eps);
    if (!(T >= 2.0 * t_eps))
        throw domain_error("inclusion_margin: T must be at least twice the truncation point " +
                           std::to_string(t_eps));
    const double c = lorentz_inclusion_constant(q, s);
    const double product = r.value_at(T) * std::pow(T, 1.0 / q);
    return c * std::pow(product, s) - lorentz_tail_integral(r, q, s, t_eps);
}

} // namespace convmax
