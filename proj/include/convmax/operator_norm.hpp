#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "convmax/convolve.hpp"
#include "convmax/exponents.hpp"
#include "convmax/hls_constant.hpp"
#include "convmax/rearrange.hpp"

namespace convmax {

/// ||k||_q, an upper bound on the p -> r operator norm of convolution with k.
inline double young_bound(const SampledFunction& k, const ExponentTriple& trip) {
    return lp_norm(k, trip.q());
}

/// C * ||k||_{q,infty}.  With the default C = 1 this is a reference scale,
/// not a certified bound; no sharp constant for the weak-kernel inequality is
/// assumed anywhere.
inline double weak_bound(const SampledFunction& k, const ExponentTriple& trip,
                         const HlsConstant& c) {
    return c.value * weak_norm(k, trip.q());
}

struct OperatorNormEstimate {
    double value = 0.0;                // == trajectory.back()
    std::vector<double> trajectory;    // Phi(f_t) = ||k * f_t||_r, ||f_t||_p = 1
    int iterations = 0;                // update steps performed
    bool converged = false;
    double rel_change_at_stop = 0.0;
};

struct MaximizerResult {
    SampledFunction f;             // candidate maximizer, ||f||_p = 1
    OperatorNormEstimate estimate;
    double eps1_level = 0.0;       // set by certify_eps1
};

struct PowerIterateOptions {
    int max_iter = 500;
    double tol = 1e-9;
};

namespace detail {

inline bool all_nonnegative(const SampledFunction& f) {
    for (double v : f.values())
        if (v < 0.0) return false;
    return true;
}

inline SampledFunction normalized(const SampledFunction& f, double p, const char* what) {
    const double n = lp_norm(f, p);
    if (!(n > 0.0)) throw degenerate_error(std::string(what) + ": zero norm");
    return (1.0 / n) * f;
}

inline double signed_pow(double v, double e) {
    return v >= 0.0 ? std::pow(v, e) : -std::pow(-v, e);
}

/// Circular reflection kappa[i] = k[(-i) mod n] per axis: the kernel of the
/// transpose of the periodic convolution.
inline SampledFunction circular_reflect(const SampledFunction& f) {
    const Grid& g = f.grid();
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    std::vector<double> v(f.size());
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < n; ++i) v[i] = f[(n - i) % n];
    } else {
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x)
                v[y * n + x] = f[((n - y) % n) * n + (n - x) % n];
    }
    return SampledFunction(g, std::move(v));
}

/// Core ascent loop shared by the p < r path and the p = r = 2 diagnostic.
/// On return `f` holds the final normalized iterate.
template <typename Fwd, typename Adj>
OperatorNormEstimate run_power_iteration(const SampledFunction& k, SampledFunction& f, double p,
                                         double r, const PowerIterateOptions& opts, Fwd&& forward,
                                         Adj&& adjoint) {
    if (opts.max_iter < 1) throw domain_error("power_iterate: max_iter must be at least 1");
    if (!(opts.tol > 0.0)) throw domain_error("power_iterate: tol must be positive");
    const bool nonneg_path = all_nonnegative(k);
    if (nonneg_path) f = map(f, [](double v) { return std::abs(v); });
    f = normalized(f, p, "power_iterate: start function");

    OperatorNormEstimate est;
    double phi = lp_norm(forward(f), r);
    if (!(phi > 0.0)) throw degenerate_error("power_iterate: k * f0 is identically zero");
    est.trajectory.push_back(phi);

    for (int t = 1; t <= opts.max_iter; ++t) {
        const SampledFunction g = forward(f);
        const SampledFunction dual = map(g, [r](double v) { return signed_pow(v, r - 1.0); });
        const SampledFunction u = adjoint(dual);
        SampledFunction fn = map(u, [p](double v) { return signed_pow(v, 1.0 / (p - 1.0)); });
        if (nonneg_path) fn = map(fn, [](double v) { return std::abs(v); });
        f = normalized(fn, p, "power_iterate: iterate collapsed to zero");

        const double next = lp_norm(forward(f), r);
        est.rel_change_at_stop = std::abs(next - phi) / std::max(next, 1e-300);
        phi = next;
        est.trajectory.push_back(phi);
        est.iterations = t;
        if (est.rel_change_at_stop < opts.tol) {
            est.converged = true;
            break;
        }
    }
    est.value = est.trajectory.back();
    return est;
}

} // namespace detail

/// Nonlinear power iteration for ||K_k||_{p -> r}: alternates
/// g = k * f,  u = k~ * (|g|^{r-1} sgn g),  f = |u|^{1/(p-1)} sgn u
/// with L_p renormalization, stopping on the relative change of
/// Phi(f) = ||k * f||_r.  Nonnegative kernels take the positivity-preserving
/// path (iterates pass through absolute value), for which the trajectory is
/// nondecreasing; signed kernels run the same map and report converged only
/// if the trajectory stabilizes.
inline MaximizerResult power_iterate(const SampledFunction& k, const ExponentTriple& trip,
                                     const SampledFunction& f0,
                                     const PowerIterateOptions& opts = {}) {
    require_same_grid(k, f0, "power_iterate");
    auto forward = [&k](const SampledFunction& x) { return convolve(k, x); };
    auto adjoint = [&k](const SampledFunction& x) { return adjoint_convolve(k, x); };
    SampledFunction f = f0;
    OperatorNormEstimate est =
        detail::run_power_iteration(k, f, trip.p(), trip.r(), opts, forward, adjoint);
    return MaximizerResult{std::move(f), std::move(est), 0.0};
}

/// Diagnostic mode: p = r = 2 on the periodic (circular) operator, whose norm
/// is exactly `fourier_symbol_max(k)`.  Kept behind its own entry point
/// because the exponent triple forbids p = r.
inline MaximizerResult power_iterate_l2_diagnostic(const SampledFunction& k,
                                                   const SampledFunction& f0,
                                                   const PowerIterateOptions& opts = {}) {
    require_same_grid(k, f0, "power_iterate");
    const SampledFunction kt = detail::circular_reflect(k);
    auto forward = [&k](const SampledFunction& x) { return circular_convolve(k, x); };
    auto adjoint = [&kt](const SampledFunction& x) { return circular_convolve(kt, x); };
    SampledFunction f = f0;
    OperatorNormEstimate est = detail::run_power_iteration(k, f, 2.0, 2.0, opts, forward, adjoint);
    return MaximizerResult{std::move(f), std::move(est), 0.0};
}

/// eps1 = 1 - Phi(f)/reference, clamped to [0, 1]: the level at which f is
/// certified an eps1-maximizer relative to the given reference value.
inline double certify_eps1(const MaximizerResult& result, double reference_value) {
    if (!(reference_value >= result.estimate.value))
        throw domain_error("certify_eps1: reference_value must dominate the estimate");
    if (!(reference_value > 0.0)) throw domain_error("certify_eps1: reference must be positive");
    const double eps1 = 1.0 - result.estimate.value / reference_value;
    return std::clamp(eps1, 0.0, 1.0);
}

/// Deterministic start profiles.  Profile 0 is the centered Gaussian with
/// sigma = half_width / 8; other seeds draw a positive three-bump mixture
/// from a seeded generator.
inline SampledFunction seeded_start(const Grid& grid, unsigned long long seed = 0) {
    if (seed == 0) {
        const double s = grid.half_width() / 8.0;
        const double inv = 1.0 / (2.0 * s * s);
        return sample(grid,
                      [inv](double x, double y = 0.0) { return std::exp(-(x * x + y * y) * inv); });
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 1.0);
    std::uniform_real_distribution<double> pos(-grid.half_width() / 2.0, grid.half_width() / 2.0);
    std::uniform_real_distribution<double> width(grid.half_width() / 16.0,
                                                 grid.half_width() / 4.0);
    struct Bump {
        double a, cx, cy, inv;
    };
    std::vector<Bump> bumps;
    for (int b = 0; b < 3; ++b) {
        const double a = amp(rng);
        const double cx = pos(rng);
        const double cy = grid.dim() == 2 ? pos(rng) : 0.0;
        const double w = width(rng);
        bumps.push_back({a, cx, cy, 1.0 / (2.0 * w * w)});
    }
    return sample(grid, [&bumps](double x, double y = 0.0) {
        double v = 0.0;
        for (const auto& b : bumps) {
            const double dx = x - b.cx, dy = y - b.cy;
            v += b.a * std::exp(-(dx * dx + dy * dy) * b.inv);
        }
        return v;
    });
}

} // namespace convmax
