#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "convmax/errors.hpp"

namespace convmax::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 FFT; size must be a power of two.
/// The inverse transform includes the 1/n scaling.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw domain_error("fft_pow2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

/// Row-column FFT of an n-by-n complex array stored row-major.
inline void fft2_pow2(std::vector<std::complex<double>>& a, std::size_t n, bool inverse) {
    if (a.size() != n * n) throw domain_error("fft2_pow2: size mismatch");
    std::vector<std::complex<double>> scratch(n);
    for (std::size_t row = 0; row < n; ++row) {
        scratch.assign(a.begin() + static_cast<std::ptrdiff_t>(row * n),
                       a.begin() + static_cast<std::ptrdiff_t>((row + 1) * n));
        fft_pow2(scratch, inverse);
        std::copy(scratch.begin(), scratch.end(),
                  a.begin() + static_cast<std::ptrdiff_t>(row * n));
    }
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t row = 0; row < n; ++row) scratch[row] = a[row * n + col];
        fft_pow2(scratch, inverse);
        for (std::size_t row = 0; row < n; ++row) a[row * n + col] = scratch[row];
    }
}

} // namespace convmax::detail
