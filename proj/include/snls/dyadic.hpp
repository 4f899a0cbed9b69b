#pragma once

// Local smoothing norms: frequency-localized X_k pieces measured over spatial
// dyadic regions, and the aggregate square-summed norm over the resolvable
// frequency band.
//
// The dyadic partition uses smooth cosine-taper bumps (sharp cutoffs ring on
// periodic grids). On a finite grid only a band of dyadic indices is
// resolvable; everything below the lowest band, including the zero mode, is
// lumped into the bottom bump so that the partition sums to one exactly.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "snls/spacetime.hpp"

namespace snls {

namespace detail {

// C^1 taper: 1 for r <= 1, 0 for r >= 2, cos^2 ramp between.
inline double taper(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double c = std::cos(1.57079632679489661923 * (r - 1.0));
    return c * c;
}

}  // namespace detail

struct DyadicBand {
    int k_min = 0;  // lowest resolvable dyadic index (lumped band)
    int k_max = 0;  // highest dyadic index
};

inline DyadicBand resolvable_band(const Grid& g) {
    const double kmin_pos = 3.14159265358979323846 / g.box_half_length;
    const double kmax = g.max_wavenumber() * std::sqrt(static_cast<double>(g.dimension));
    DyadicBand band;
    band.k_min = static_cast<int>(std::floor(std::log2(kmin_pos)));
    band.k_max = static_cast<int>(std::ceil(std::log2(kmax)));
    return band;
}

// Bump S_k evaluated at radial frequency r, within the band convention above.
inline double dyadic_bump(double r, int k, const DyadicBand& band) {
    if (k < band.k_min || k > band.k_max) {
        // out-of-band indices project to zero
        return 0.0;
    }
    const double scale_k = std::ldexp(1.0, -k);  // 2^{-k}
    if (k == band.k_min) return detail::taper(r * scale_k);
    return detail::taper(r * scale_k) - detail::taper(r * scale_k * 2.0);
}

// Frequency projection S_k applied to every time slice.
inline SpaceTimeField littlewood_paley_project(const SpaceTimeField& u, int k) {
    const Grid& g = u.grid;
    const DyadicBand band = resolvable_band(g);
    std::vector<double> mask(g.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = dyadic_bump(std::sqrt(g.k2_at(i)), k, band);

    SpaceTimeField out(g, u.dt, u.slices);
    std::vector<cplx> work(g.size());
    for (int m = 0; m < u.slices; ++m) {
        const cplx* src = u.slice(m);
        std::copy(src, src + g.size(), work.begin());
        fft_nd(work, g.dimension, static_cast<std::size_t>(g.points_per_axis), false);
        for (std::size_t i = 0; i < work.size(); ++i) work[i] *= mask[i];
        fft_nd(work, g.dimension, static_cast<std::size_t>(g.points_per_axis), true);
        std::copy(work.begin(), work.end(), out.slice(m));
    }
    return out;
}

namespace detail {

// Spatial dyadic regions: region 0 is the ball {|xi| <= 2}, region j >= 1 the
// annulus {2^j <= |xi| <= 2^{j+1}}.
inline int spatial_region(double r) {
    if (r <= 2.0) return 0;
    const int j = static_cast<int>(std::floor(std::log2(r)));
    return j;
}

struct RegionTable {
    std::vector<int> region;      // per lattice point
    std::vector<double> radius;   // |xi| per lattice point
    int max_region = 0;
};

inline RegionTable build_regions(const Grid& g) {
    RegionTable t;
    t.region.resize(g.size());
    t.radius.resize(g.size());
    std::array<double, 3> xi{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, xi);
        double r2 = 0.0;
        for (int d = 0; d < g.dimension; ++d)
            r2 += xi[static_cast<std::size_t>(d)] * xi[static_cast<std::size_t>(d)];
        const double r = std::sqrt(r2);
        t.radius[i] = r;
        t.region[i] = spatial_region(r);
        t.max_region = std::max(t.max_region, t.region[i]);
    }
    return t;
}

// Time-integrated (trapezoid) weighted L^2 over a point predicate.
template <class Pred, class Weight>
inline double l2_over(const SpaceTimeField& u, int upto, Pred&& pred, Weight&& w) {
    const std::size_t n = u.points();
    const double hV = u.grid.cell_volume();
    double acc = 0.0;
    for (int m = 0; m <= upto; ++m) {
        const cplx* s = u.slice(m);
        double slice_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (pred(i)) slice_sum += w(i) * std::norm(s[i]);
        acc += trapezoid_weight(m, upto) * slice_sum;
    }
    if (upto == 0) return 0.0;
    return std::sqrt(u.dt * acc * hV);
}

}  // namespace detail

// The X_k norm of a frequency-localized input over [0, T]; the caller is
// responsible for the localization (littlewood_paley_project is provided).
inline double xk_norm(const SpaceTimeField& u_k, int k, double T) {
    const int upto = std::min(u_k.slices - 1,
                              static_cast<int>(std::llround(T / (u_k.dt > 0 ? u_k.dt : 1.0))));
    const auto regions = detail::build_regions(u_k.grid);
    const auto in_region = [&](int j) {
        return [&regions, j](std::size_t i) { return regions.region[i] == j; };
    };
    const auto unweighted = [](std::size_t) { return 1.0; };

    if (k >= 0) {
        const double ball = detail::l2_over(u_k, upto, in_region(0), unweighted);
        double sup = 0.0;
        for (int j = 1; j <= regions.max_region; ++j) {
            const double v = detail::l2_over(u_k, upto, in_region(j), [&](std::size_t i) {
                return 1.0 / std::sqrt(1.0 + regions.radius[i] * regions.radius[i]);
            });
            sup = std::max(sup, v);
        }
        return ball + sup;
    }

    const double pow2_negk = std::ldexp(1.0, -k);  // 2^{-k}
    const double inner = detail::l2_over(
        u_k, upto, [&](std::size_t i) { return regions.radius[i] <= pow2_negk; }, unweighted);
    double sup = 0.0;
    for (int j = -k; j <= regions.max_region; ++j) {
        const double v = detail::l2_over(u_k, upto, in_region(j), [&](std::size_t i) {
            return 1.0 / (regions.radius[i] + pow2_negk);
        });
        sup = std::max(sup, v);
    }
    return std::pow(2.0, 0.5 * k) * inner + sup;
}

// Aggregate local-smoothing norm over the resolvable band; the d = 2 variant
// carries the logarithmic weight in the unlocalized term.
inline double xtilde_norm(const SpaceTimeField& u, double T) {
    const Grid& g = u.grid;
    const int upto = std::min(u.slices - 1,
                              static_cast<int>(std::llround(T / (u.dt > 0 ? u.dt : 1.0))));
    const auto regions = detail::build_regions(g);
    const auto all = [](std::size_t) { return true; };
    const double base = detail::l2_over(u, upto, all, [&](std::size_t i) {
        const double r = regions.radius[i];
        double w = 1.0 / (1.0 + r * r);  // <xi>^{-2} as a squared weight
        if (g.dimension == 2) {
            const double lg = std::log(2.0 + r);
            w /= lg * lg;
        }
        return w;
    });

    const DyadicBand band = resolvable_band(g);
    double sum = base * base;
    for (int k = band.k_min; k <= band.k_max; ++k) {
        const SpaceTimeField uk = littlewood_paley_project(u, k);
        const double nk = xk_norm(uk, k, T);
        sum += std::ldexp(1.0, k) * nk * nk;
    }
    return std::sqrt(sum);
}

}  // namespace snls
