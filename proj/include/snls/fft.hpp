#pragma once

// Iterative radix-2 Cooley-Tukey transforms for power-of-two lengths.
// Forward is unnormalized; inverse carries the 1/len factor, so
// fft_inverse(fft_forward(f)) == f up to rounding.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace snls {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddle table for length n: w[j] = exp(-2*pi*i*j/n), j < n/2.
inline const std::vector<cplx>& twiddles(std::size_t n) {
    thread_local std::vector<std::vector<cplx>> cache;
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    if (cache.size() <= log2n) cache.resize(log2n + 1);
    auto& tw = cache[log2n];
    if (tw.size() != n / 2) {
        tw.resize(n / 2);
        const double step = -6.28318530717958647692 / static_cast<double>(n);
        for (std::size_t j = 0; j < n / 2; ++j)
            tw[j] = cplx(std::cos(step * static_cast<double>(j)),
                         std::sin(step * static_cast<double>(j)));
    }
    return tw;
}

}  // namespace detail

// In-place transform of a contiguous length-n line.
inline void fft_line(cplx* a, std::size_t n, bool inverse) {
    if (!detail::is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = detail::twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx w = tw[j * stride];
                if (inverse) w = std::conj(w);
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= scale;
    }
}

// d-dimensional transform of a row-major cube with `n` points per axis.
// The last axis is contiguous; other axes are gathered through a scratch line.
inline void fft_nd(std::vector<cplx>& a, int dimension, std::size_t n, bool inverse) {
    std::size_t total = 1;
    for (int d = 0; d < dimension; ++d) total *= n;
    if (a.size() != total) throw std::invalid_argument("fft: size does not match grid");

    std::vector<cplx> line(n);
    for (int axis = dimension - 1; axis >= 0; --axis) {
        std::size_t stride = 1;
        for (int d = dimension - 1; d > axis; --d) stride *= n;
        const std::size_t block = stride * n;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                if (stride == 1) {
                    fft_line(a.data() + base, n, inverse);
                } else {
                    for (std::size_t i = 0; i < n; ++i) line[i] = a[base + off + i * stride];
                    fft_line(line.data(), n, inverse);
                    for (std::size_t i = 0; i < n; ++i) a[base + off + i * stride] = line[i];
                }
            }
        }
    }
}

}  // namespace snls
