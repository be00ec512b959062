#pragma once

#include <complex>
#include <vector>

#include "convmax/fft.hpp"
#include "convmax/grid.hpp"

namespace convmax {

namespace detail {

/// Linear index-space convolution out[m] = mu * sum_j k[j] f[m - j + c]
/// (zero extension off the grid), one alignment shift c per axis, computed by
/// zero-padded FFT so wraparound never reaches the retained box.
inline SampledFunction conv_aligned(const SampledFunction& k, const SampledFunction& f,
                                    long shift) {
    require_same_grid(k, f, "convolve");
    const Grid& g = k.grid();
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    const std::size_t pad = next_pow2(2 * n - 1);
    const double mu = g.cell_measure();
    std::vector<double> out(g.cell_count());
    if (g.dim() == 1) {
        std::vector<std::complex<double>> ka(pad), fa(pad);
        for (std::size_t i = 0; i < n; ++i) {
            ka[i] = k[i];
            fa[i] = f[i];
        }
        fft_pow2(ka, false);
        fft_pow2(fa, false);
        for (std::size_t i = 0; i < pad; ++i) ka[i] *= fa[i];
        fft_pow2(ka, true);
        // Full linear convolution lives at indices [0, 2n-2]; out[m] = c[m + shift].
        for (std::size_t m = 0; m < n; ++m) {
            const long s = static_cast<long>(m) + shift;
            out[m] = (s >= 0 && s < static_cast<long>(2 * n - 1))
                         ? mu * ka[static_cast<std::size_t>(s)].real()
                         : 0.0;
        }
    } else {
        std::vector<std::complex<double>> ka(pad * pad), fa(pad * pad);
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x) {
                ka[y * pad + x] = k[y * n + x];
                fa[y * pad + x] = f[y * n + x];
            }
        fft2_pow2(ka, pad, false);
        fft2_pow2(fa, pad, false);
        for (std::size_t i = 0; i < pad * pad; ++i) ka[i] *= fa[i];
        fft2_pow2(ka, pad, true);
        for (std::size_t y = 0; y < n; ++y) {
            const long sy = static_cast<long>(y) + shift;
            for (std::size_t x = 0; x < n; ++x) {
                const long sx = static_cast<long>(x) + shift;
                double v = 0.0;
                if (sx >= 0 && sx < static_cast<long>(2 * n - 1) && sy >= 0 &&
                    sy < static_cast<long>(2 * n - 1))
                    v = mu * ka[static_cast<std::size_t>(sy) * pad + static_cast<std::size_t>(sx)]
                             .real();
                out[y * n + x] = v;
            }
        }
    }
    return SampledFunction(g, std::move(out));
}

inline SampledFunction reflect(const SampledFunction& f) {
    const Grid& g = f.grid();
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    std::vector<double> v(f.size());
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < n; ++i) v[i] = f[n - 1 - i];
    } else {
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x) v[y * n + x] = f[(n - 1 - y) * n + (n - 1 - x)];
    }
    return SampledFunction(g, std::move(v));
}

} // namespace detail

/// Cell-measure-weighted linear convolution on the common grid, zero padded
/// so the result is the restriction of the full-line convolution to the box.
/// On even grids the sum lattice sits half a cell off the center lattice; the
/// alignment used here represents (k*f)(x + cell_width/2), exact for the
/// discrete delta placed at index n/2.  Odd grids align exactly.
inline SampledFunction convolve(const SampledFunction& k, const SampledFunction& f) {
    return detail::conv_aligned(k, f, k.grid().points_per_axis() / 2);
}

/// Exact transpose of `convolve(k, .)` in the mu-weighted inner product:
/// convolution with the reflected kernel at the mirrored alignment.
inline SampledFunction adjoint_convolve(const SampledFunction& k, const SampledFunction& g) {
    const long n = k.grid().points_per_axis();
    return detail::conv_aligned(detail::reflect(k), g, n - 1 - n / 2);
}

/// Circular (periodic) convolution on the grid itself, no padding.  Used by
/// the p = r = 2 diagnostic mode, where the operator must be exactly
/// diagonalized by the DFT.  Requires power-of-two points_per_axis.
inline SampledFunction circular_convolve(const SampledFunction& k, const SampledFunction& f) {
    require_same_grid(k, f, "circular_convolve");
    const Grid& g = k.grid();
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    if (!detail::is_pow2(n))
        throw domain_error("circular_convolve: points_per_axis must be a power of two");
    const double mu = g.cell_measure();
    const long shift = static_cast<long>(n) / 2;
    std::vector<double> out(g.cell_count());
    if (g.dim() == 1) {
        std::vector<std::complex<double>> ka(n), fa(n);
        for (std::size_t i = 0; i < n; ++i) {
            ka[i] = k[i];
            fa[i] = f[i];
        }
        detail::fft_pow2(ka, false);
        detail::fft_pow2(fa, false);
        for (std::size_t i = 0; i < n; ++i) ka[i] *= fa[i];
        detail::fft_pow2(ka, true);
        for (std::size_t m = 0; m < n; ++m)
            out[m] = mu * ka[static_cast<std::size_t>((static_cast<long>(m) + shift) %
                                                      static_cast<long>(n))]
                              .real();
    } else {
        std::vector<std::complex<double>> ka(n * n), fa(n * n);
        for (std::size_t i = 0; i < n * n; ++i) {
            ka[i] = k[i];
            fa[i] = f[i];
        }
        detail::fft2_pow2(ka, n, false);
        detail::fft2_pow2(fa, n, false);
        for (std::size_t i = 0; i < n * n; ++i) ka[i] *= fa[i];
        detail::fft2_pow2(ka, n, true);
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x) {
                const std::size_t sy = static_cast<std::size_t>(
                    (static_cast<long>(y) + shift) % static_cast<long>(n));
                const std::size_t sx = static_cast<std::size_t>(
                    (static_cast<long>(x) + shift) % static_cast<long>(n));
                out[y * n + x] = mu * ka[sy * n + sx].real();
            }
    }
    return SampledFunction(g, std::move(out));
}

/// max over DFT bins of |mu * k_hat|: the exact L2 -> L2 operator norm of the
/// circular convolution with k.  Power-of-two grids only.
inline double fourier_symbol_max(const SampledFunction& k) {
    const Grid& g = k.grid();
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    if (!detail::is_pow2(n))
        throw domain_error("fourier_symbol_max: points_per_axis must be a power of two");
    const double mu = g.cell_measure();
    double best = 0.0;
    if (g.dim() == 1) {
        std::vector<std::complex<double>> ka(n);
        for (std::size_t i = 0; i < n; ++i) ka[i] = k[i];
        detail::fft_pow2(ka, false);
        for (const auto& c : ka) best = std::max(best, std::abs(c));
    } else {
        std::vector<std::complex<double>> ka(n * n);
        for (std::size_t i = 0; i < n * n; ++i) ka[i] = k[i];
        detail::fft2_pow2(ka, n, false);
        for (const auto& c : ka) best = std::max(best, std::abs(c));
    }
    return mu * best;
}

} // namespace convmax
