#pragma once

// Fourier transforms on fields, differential operators as multipliers, and
// the Lebesgue / Sobolev / Bessel-potential norms.
//
// Conventions fixed for reproducibility: row-major axis order, natural DFT
// index order in spectral arrays, Delta <-> -|k|^2, d_j <-> i k_j, and the
// Bessel weight <k>^s = (1+|k|^2)^(s/2) for W^{s,p} at every p.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

inline std::vector<cplx> fft_forward(const ComplexField& f) {
    std::vector<cplx> c = f.values;
    fft_nd(c, f.grid.dimension, static_cast<std::size_t>(f.grid.points_per_axis), false);
    return c;
}

inline ComplexField fft_inverse(const Grid& grid, std::vector<cplx> coeffs) {
    if (coeffs.size() != grid.size()) throw std::invalid_argument("fft_inverse: size mismatch");
    fft_nd(coeffs, grid.dimension, static_cast<std::size_t>(grid.points_per_axis), true);
    return ComplexField(grid, std::move(coeffs));
}

// Apply a spectral multiplier m(flat index) in place on physical-space data.
template <class Mult>
inline void apply_multiplier(ComplexField& f, Mult&& m) {
    std::vector<cplx> c = fft_forward(f);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= m(i);
    f = fft_inverse(f.grid, std::move(c));
}

inline ComplexField laplacian(const ComplexField& f) {
    ComplexField out = f;
    apply_multiplier(out, [&g = out.grid](std::size_t i) { return -g.k2_at(i); });
    return out;
}

inline std::vector<ComplexField> gradient(const ComplexField& f) {
    const Grid& g = f.grid;
    std::vector<cplx> c = fft_forward(f);
    std::vector<ComplexField> out;
    out.reserve(static_cast<std::size_t>(g.dimension));
    std::array<int, 3> idx{};
    for (int axis = 0; axis < g.dimension; ++axis) {
        std::vector<cplx> ca(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            g.unflatten(i, idx);
            const double k = g.wavenumber(idx[static_cast<std::size_t>(axis)]);
            ca[i] = c[i] * cplx(0.0, k);
        }
        out.push_back(fft_inverse(g, std::move(ca)));
    }
    return out;
}

// 2/3-rule dealiasing: zero every mode with |m| >= n/3 on any axis.
inline void dealias_two_thirds(std::vector<cplx>& coeffs, const Grid& g) {
    const int cutoff = g.points_per_axis / 3;
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        g.unflatten(i, idx);
        for (int d = 0; d < g.dimension; ++d) {
            if (std::abs(g.signed_mode(idx[static_cast<std::size_t>(d)])) >= cutoff) {
                coeffs[i] = cplx(0.0, 0.0);
                break;
            }
        }
    }
}

inline ComplexField dealias_two_thirds(const ComplexField& f) {
    std::vector<cplx> c = fft_forward(f);
    dealias_two_thirds(c, f.grid);
    return fft_inverse(f.grid, std::move(c));
}

// ||f||_{L^p} on the box; p = infinity() accepted.
inline double lebesgue_norm(const ComplexField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const cplx& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    const double hV = f.grid.cell_volume();
    if (p == 2.0) {
        double s = 0.0;
        for (const cplx& v : f.values) s += std::norm(v);
        return std::sqrt(hV * s);
    }
    double s = 0.0;
    for (const cplx& v : f.values) s += std::pow(std::abs(v), p);
    return std::pow(hV * s, 1.0 / p);
}

namespace detail {
inline double bessel_weight(double k2, double s) {
    if (s == 0.0) return 1.0;
    if (s == 2.0) return 1.0 + k2;
    if (s == 1.0) return std::sqrt(1.0 + k2);
    return std::pow(1.0 + k2, 0.5 * s);
}
}  // namespace detail

// ||<D>^s f||_{L^2} computed entirely in spectral space.
inline double sobolev_norm(const ComplexField& f, double s) {
    if (!(s >= 0.0) || !(s <= 2.0)) throw std::invalid_argument("sobolev_norm: s must be in [0,2]");
    std::vector<cplx> c = fft_forward(f);
    const Grid& g = f.grid;
    const double scale = g.cell_volume() / static_cast<double>(g.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double w = detail::bessel_weight(g.k2_at(i), s);
        sum += w * w * std::norm(c[i]);
    }
    return std::sqrt(scale * sum);
}

// <D>^s f as a field (Bessel potential of order -s applied inverse-wise).
inline ComplexField bessel_apply(const ComplexField& f, double s) {
    ComplexField out = f;
    apply_multiplier(out, [&g = out.grid, s](std::size_t i) {
        return detail::bessel_weight(g.k2_at(i), s);
    });
    return out;
}

// ||f||_{W^{s,p}} = ||<D>^s f||_{L^p}, single code path for every p.
inline double wsp_norm(const ComplexField& f, double s, double p) {
    if (!(s >= 0.0) || !(s <= 2.0)) throw std::invalid_argument("wsp_norm: s must be in [0,2]");
    if (!(p >= 1.0)) throw std::invalid_argument("wsp_norm: p must be >= 1");
    if (s == 0.0) return lebesgue_norm(f, p);
    return lebesgue_norm(bessel_apply(f, s), p);
}

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace snls
