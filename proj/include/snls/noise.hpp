#pragma once

// Noise model: Gaussian profiles phi_j, independent Brownian channels beta_j,
// the purely imaginary exponent field W(t,xi) = i sum_j phi_j(xi) beta_j(t),
// and the derived first-order coefficients
//   b = 2 grad W,   c = sum_j (d_j W)^2 + Delta W,   mu = (1/2) sum_j phi_j^2.
//
// Profile derivatives are analytic (per-axis Hermite-type recurrences), so no
// differentiation error enters b and c.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "snls/grid.hpp"
#include "snls/rng.hpp"

namespace snls {

struct ProfileSpec {
    // phi(xi) = amplitude * exp(-|xi - center|^2 / width^2)
    double amplitude = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double width = 1.0;

    void validate() const {
        if (!(width > 0.0)) throw std::invalid_argument("profile: width must be positive");
        if (!std::isfinite(amplitude)) throw std::invalid_argument("profile: bad amplitude");
    }
};

namespace detail {

// Coefficients of P_n with d^n/du^n exp(-u^2/w^2) = P_n(u) exp(-u^2/w^2),
// via P_{n+1} = P_n' - (2u/w^2) P_n.
inline std::vector<std::vector<double>> gaussian_derivative_polys(double width, int max_order) {
    const double a = -2.0 / (width * width);
    std::vector<std::vector<double>> polys;
    polys.push_back({1.0});
    for (int n = 0; n < max_order; ++n) {
        const auto& p = polys.back();
        std::vector<double> next(p.size() + 1, 0.0);
        for (std::size_t j = 1; j < p.size(); ++j) next[j - 1] += static_cast<double>(j) * p[j];
        for (std::size_t j = 0; j < p.size(); ++j) next[j + 1] += a * p[j];
        polys.push_back(std::move(next));
    }
    return polys;
}

inline double poly_eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) v = v * u + c[j];
    return v;
}

}  // namespace detail

// Partial derivative of one Gaussian profile, any multi-index up to order 4.
inline double profile_derivative(const ProfileSpec& p, const std::array<int, 3>& order,
                                 const std::array<double, 3>& xi, int dimension) {
    static thread_local double cached_width = -1.0;
    static thread_local std::vector<std::vector<double>> polys;
    if (cached_width != p.width) {
        polys = detail::gaussian_derivative_polys(p.width, 4);
        cached_width = p.width;
    }
    double v = p.amplitude;
    for (int d = 0; d < dimension; ++d) {
        const double u = xi[static_cast<std::size_t>(d)] - p.center[static_cast<std::size_t>(d)];
        const int n = order[static_cast<std::size_t>(d)];
        if (n > 4) throw std::invalid_argument("profile_derivative: order > 4");
        v *= detail::poly_eval(polys[static_cast<std::size_t>(n)], u) *
             std::exp(-u * u / (p.width * p.width));
    }
    return v;
}

// A sampled Brownian family on a uniform time grid, plus dyadic bridge
// refinement. Increments are the primary data; values are prefix sums.
//
// Every increment is kept on a power-of-two lattice (spacing ~ 2^-27 sqrt(dt),
// a relative perturbation far below any statistical tolerance). Halving a
// lattice value and adding a half-lattice bridge offset are then exact in
// binary floating point, so each refinement splits every coarse increment
// into two fine increments whose sum reproduces it bit-for-bit.
struct BrownianPath {
    int channels = 0;
    double horizon = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    int level = 0;        // number of bridge refinements applied
    int step_count = 0;   // time-grid steps, independent of the channel count
    double lattice = 0.0; // increment quantum, a power of two
    std::vector<std::vector<double>> increments;  // [channel][step]
    std::vector<std::vector<double>> values;      // [channel][node], values[c][0] = 0

    int steps() const { return step_count; }
    double time_at(int m) const { return m * dt; }

    // beta_c at node m plus frac*increment, frac in [0,1] (linear within a step).
    double beta_at(int channel, int m, double frac) const {
        const auto c = static_cast<std::size_t>(channel);
        if (frac == 0.0 || m >= steps()) return values[c][static_cast<std::size_t>(m)];
        return values[c][static_cast<std::size_t>(m)] +
               frac * increments[c][static_cast<std::size_t>(m)];
    }

    void rebuild_values() {
        values.assign(increments.size(), {});
        for (std::size_t c = 0; c < increments.size(); ++c) {
            values[c].resize(increments[c].size() + 1);
            values[c][0] = 0.0;
            for (std::size_t m = 0; m < increments[c].size(); ++m)
                values[c][m + 1] = values[c][m] + increments[c][m];
        }
    }
};

namespace detail {

// Power-of-two quantum ~ 2^-27 sqrt(dt).
inline double increment_lattice(double dt) {
    int e = 0;
    std::frexp(std::sqrt(dt), &e);
    return std::ldexp(1.0, e - 27);
}

inline double snap(double v, double unit) { return std::round(v / unit) * unit; }

}  // namespace detail

inline BrownianPath sample_path(int channels, double T, double dt, std::uint64_t seed) {
    if (channels < 0) throw std::invalid_argument("sample_path: negative channel count");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_path: dt must be positive");
    const double ratio = T / dt;
    const auto steps = static_cast<std::int64_t>(std::llround(ratio));
    if (steps < 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("sample_path: T/dt must be an integer step count");

    BrownianPath path;
    path.channels = channels;
    path.horizon = T;
    path.dt = dt;
    path.seed = seed;
    path.step_count = static_cast<int>(steps);
    path.lattice = detail::increment_lattice(dt);
    path.increments.assign(static_cast<std::size_t>(channels), {});
    const double sq = std::sqrt(dt);
    for (int c = 0; c < channels; ++c) {
        auto& inc = path.increments[static_cast<std::size_t>(c)];
        inc.resize(static_cast<std::size_t>(steps));
        for (std::int64_t m = 0; m < steps; ++m)
            inc[static_cast<std::size_t>(m)] = detail::snap(
                sq * normal(seed, stream_id(kStreamPathIncrement, static_cast<std::uint32_t>(c)),
                            static_cast<std::uint64_t>(m)),
                path.lattice);
    }
    path.rebuild_values();
    return path;
}

// One dyadic bridge refinement. Coarse increments are multiples of the
// lattice; the two halves live on the half lattice, so d1, d2 and d1 + d2
// are all exact and the coarse increment is reproduced bit-for-bit.
inline BrownianPath refine_path(const BrownianPath& coarse) {
    BrownianPath fine;
    fine.channels = coarse.channels;
    fine.horizon = coarse.horizon;
    fine.dt = 0.5 * coarse.dt;
    fine.seed = coarse.seed;
    fine.level = coarse.level + 1;
    fine.step_count = 2 * coarse.step_count;
    fine.lattice = 0.5 * coarse.lattice;
    fine.increments.assign(coarse.increments.size(), {});
    const double half_sd = 0.5 * std::sqrt(coarse.dt);  // midpoint bridge stddev
    for (std::size_t c = 0; c < coarse.increments.size(); ++c) {
        const auto& inc = coarse.increments[c];
        auto& out = fine.increments[c];
        out.resize(2 * inc.size());
        const std::uint64_t stream = stream_id(
            kStreamBridge, (static_cast<std::uint32_t>(fine.level) << 16) |
                               static_cast<std::uint32_t>(c));
        for (std::size_t m = 0; m < inc.size(); ++m) {
            const double delta = inc[m];
            const double xi =
                detail::snap(half_sd * normal(coarse.seed, stream, m), fine.lattice);
            const double d1 = 0.5 * delta + xi;
            const double d2 = 0.5 * delta - xi;
            out[2 * m] = d1;
            out[2 * m + 1] = d2;
        }
    }
    fine.rebuild_values();
    return fine;
}

inline BrownianPath refine_path(BrownianPath path, int times) {
    for (int i = 0; i < times; ++i) path = refine_path(path);
    return path;
}

// Decay-certificate report for the profile family: per derivative order, the
// maximum of zeta(xi)*|d^gamma phi_j(xi)| over the outer shell of the box.
struct DecayReport {
    std::vector<double> shell_max_by_order;  // index = |gamma|, 0..s+2
    double threshold = 1e-10;
    bool pass = true;
};

struct NoiseModel {
    Grid grid;
    std::vector<ProfileSpec> profiles;

    // Cached lattices, one per channel.
    std::vector<std::vector<double>> phi;                   // [j][point]
    std::vector<std::array<std::vector<double>, 3>> dphi;   // [j][axis][point]
    std::vector<std::vector<double>> lap_phi;               // [j][point]

    NoiseModel() = default;
    NoiseModel(const Grid& g, std::vector<ProfileSpec> specs)
        : grid(g), profiles(std::move(specs)) {
        for (const auto& p : profiles) p.validate();
        cache_lattices();
    }

    int channels() const { return static_cast<int>(profiles.size()); }

    void cache_lattices() {
        const std::size_t total = grid.size();
        phi.assign(profiles.size(), std::vector<double>(total));
        dphi.assign(profiles.size(), {});
        lap_phi.assign(profiles.size(), std::vector<double>(total));
        std::array<double, 3> xi{};
        for (std::size_t j = 0; j < profiles.size(); ++j) {
            for (int axis = 0; axis < grid.dimension; ++axis)
                dphi[j][static_cast<std::size_t>(axis)].resize(total);
            for (std::size_t i = 0; i < total; ++i) {
                grid.point(i, xi);
                phi[j][i] = profile_derivative(profiles[j], {0, 0, 0}, xi, grid.dimension);
                double lap = 0.0;
                for (int axis = 0; axis < grid.dimension; ++axis) {
                    std::array<int, 3> o{0, 0, 0};
                    o[static_cast<std::size_t>(axis)] = 1;
                    dphi[j][static_cast<std::size_t>(axis)][i] =
                        profile_derivative(profiles[j], o, xi, grid.dimension);
                    o[static_cast<std::size_t>(axis)] = 2;
                    lap += profile_derivative(profiles[j], o, xi, grid.dimension);
                }
                lap_phi[j][i] = lap;
            }
        }
    }

    // theta(t, xi) = sum_j phi_j(xi) beta_j(t); W = i*theta.
    std::vector<double> theta_at(const BrownianPath& path, int m, double frac = 0.0) const {
        std::vector<double> th(grid.size(), 0.0);
        accumulate_theta(path, m, frac, th);
        return th;
    }

    void accumulate_theta(const BrownianPath& path, int m, double frac,
                          std::vector<double>& th) const {
        if (path.channels != channels())
            throw std::invalid_argument("noise: path channel count mismatch");
        for (int j = 0; j < channels(); ++j) {
            const double b = path.beta_at(j, m, frac);
            if (b == 0.0) continue;
            const auto& ph = phi[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < th.size(); ++i) th[i] += b * ph[i];
        }
    }

    // W(t_m) as a purely imaginary field; Re W = 0 exactly by construction.
    ComplexField evaluate_W(const BrownianPath& path, int m, double frac = 0.0) const {
        if (m > path.steps() || m < 0) throw std::out_of_range("evaluate_W: time index");
        ComplexField w(grid);
        const auto th = theta_at(path, m, frac);
        for (std::size_t i = 0; i < th.size(); ++i) w[i] = cplx(0.0, th[i]);
        return w;
    }

    // b = 2 grad W: d purely imaginary component fields.
    std::vector<ComplexField> coefficient_b(const BrownianPath& path, int m,
                                            double frac = 0.0) const {
        std::vector<ComplexField> b;
        b.reserve(static_cast<std::size_t>(grid.dimension));
        for (int axis = 0; axis < grid.dimension; ++axis) {
            ComplexField comp(grid);
            for (int j = 0; j < channels(); ++j) {
                const double beta = path.beta_at(j, m, frac);
                if (beta == 0.0) continue;
                const auto& dp = dphi[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)];
                for (std::size_t i = 0; i < comp.size(); ++i)
                    comp[i] += cplx(0.0, 2.0 * beta * dp[i]);
            }
            b.push_back(std::move(comp));
        }
        return b;
    }

    // c = sum_j (d_j W)^2 + Delta W; the square term is real and <= 0.
    ComplexField coefficient_c(const BrownianPath& path, int m, double frac = 0.0) const {
        ComplexField c(grid);
        std::vector<double> dw(grid.size());
        for (int axis = 0; axis < grid.dimension; ++axis) {
            std::fill(dw.begin(), dw.end(), 0.0);
            for (int j = 0; j < channels(); ++j) {
                const double beta = path.beta_at(j, m, frac);
                if (beta == 0.0) continue;
                const auto& dp = dphi[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)];
                for (std::size_t i = 0; i < dw.size(); ++i) dw[i] += beta * dp[i];
            }
            for (std::size_t i = 0; i < dw.size(); ++i) c[i] += cplx(-dw[i] * dw[i], 0.0);
        }
        for (int j = 0; j < channels(); ++j) {
            const double beta = path.beta_at(j, m, frac);
            if (beta == 0.0) continue;
            const auto& lp = lap_phi[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += cplx(0.0, beta * lp[i]);
        }
        return c;
    }

    // mu = (1/2) sum_j phi_j^2 >= 0.
    std::vector<double> mu_profile() const {
        std::vector<double> mu(grid.size(), 0.0);
        for (int j = 0; j < channels(); ++j) {
            const auto& ph = phi[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += 0.5 * ph[i] * ph[i];
        }
        return mu;
    }

    // Lattice maxima used by the integrator's stability guard.
    double max_abs_phi(int j) const {
        double m = 0.0;
        for (double v : phi[static_cast<std::size_t>(j)]) m = std::max(m, std::abs(v));
        return m;
    }
    double max_abs_dphi(int j) const {
        double m = 0.0;
        for (int axis = 0; axis < grid.dimension; ++axis)
            for (double v : dphi[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)])
                m = std::max(m, std::abs(v));
        return m;
    }
    double max_abs_lap_phi(int j) const {
        double m = 0.0;
        for (double v : lap_phi[static_cast<std::size_t>(j)]) m = std::max(m, std::abs(v));
        return m;
    }
};

// zeta weight of the decay condition; d = 2 carries the logarithmic factor.
inline double h1s_weight(double r2, int dimension) {
    const double base = 1.0 + r2;
    if (dimension != 2) return base;
    const double lg = std::log(3.0 + r2);
    return base * lg * lg;
}

// Numeric decay certificate on the outermost 10% shell of the box
// (sup-norm sense: ||xi||_inf >= 0.9 L), for every |gamma| <= s+2.
inline DecayReport check_h1s(const NoiseModel& model, int s, const Grid& grid,
                             double threshold = 1e-10) {
    if (s < 0 || s > 2) throw std::invalid_argument("check_h1s: s must be in {0,1,2}");
    const int max_order = s + 2;
    DecayReport report;
    report.threshold = threshold;
    report.shell_max_by_order.assign(static_cast<std::size_t>(max_order) + 1, 0.0);

    // enumerate multi-indices of total order <= max_order
    std::vector<std::array<int, 3>> orders;
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; b <= max_order - a; ++b)
            for (int c = 0; c <= max_order - a - b; ++c) {
                std::array<int, 3> o{a, b, c};
                bool ok = true;
                for (int d = grid.dimension; d < 3; ++d)
                    if (o[static_cast<std::size_t>(d)] != 0) ok = false;
                if (ok) orders.push_back(o);
            }

    const double shell = 0.9 * grid.box_half_length;
    std::array<double, 3> xi{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, xi);
        double linf = 0.0, r2 = 0.0;
        for (int d = 0; d < grid.dimension; ++d) {
            linf = std::max(linf, std::abs(xi[static_cast<std::size_t>(d)]));
            r2 += xi[static_cast<std::size_t>(d)] * xi[static_cast<std::size_t>(d)];
        }
        if (linf < shell) continue;
        const double zeta = h1s_weight(r2, grid.dimension);
        for (const auto& o : orders) {
            const int total = o[0] + o[1] + o[2];
            for (const auto& prof : model.profiles) {
                const double v = zeta * std::abs(profile_derivative(prof, o, xi, grid.dimension));
                auto& slot = report.shell_max_by_order[static_cast<std::size_t>(total)];
                slot = std::max(slot, v);
            }
        }
    }
    for (double v : report.shell_max_by_order)
        if (v > threshold) report.pass = false;
    return report;
}

}  // namespace snls
