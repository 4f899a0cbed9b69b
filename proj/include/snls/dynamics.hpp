#pragma once

// Time integrators.
//
// Direct formulation: Strang-split step for the stochastic equation. The
// combined noise-and-damping substep is exact multiplication by
// exp(W(t_{m+1}) - W(t_m)) — a unit-modulus field, since W is purely
// imaginary — which absorbs the X dW term and the -mu X dt correction at
// once. The free flow is the exact Fourier multiplier exp(+i|k|^2 dt) for
// i dX = Delta X dt, and the nonlinear substep is the exact pointwise phase
// rotation X -> exp(-i lambda |X|^{alpha-1} dt) X. Every substep preserves
// |X| pointwise or spectrally, so the L^2 norm is conserved to rounding.
//
// Rescaled formulation: classical RK4 on the pathwise equation
//   dy/dt = A(t) y - i lambda |y|^{alpha-1} y,
//   A(t) y = -i (Delta + b.grad + c) y,
// with Delta and grad spectral, the variable-coefficient products pointwise,
// 2/3-rule dealiasing on the nonlinear term, and Brownian values linearly
// interpolated at half-stage times.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snls/noise.hpp"
#include "snls/spacetime.hpp"
#include "snls/spectral.hpp"

namespace snls {

struct BlowupSuspected : std::runtime_error {
    double time;
    explicit BlowupSuspected(double t)
        : std::runtime_error("blow-up suspected: non-finite field at t = " + std::to_string(t)),
          time(t) {}
};

struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// RK4 marches a purely dispersive spectrum; |dt * A| estimates above this
// leave the method's imaginary-axis stability interval (|z| <= 2*sqrt(2)).
inline constexpr double kStabilityBudget = 2.8;

inline void require_finite(const ComplexField& f, double t) {
    if (!f.is_finite()) throw BlowupSuspected(t);
}

// ---------------------------------------------------------------------------
// Direct split step
// ---------------------------------------------------------------------------

struct DirectStepper {
    const NoiseModel* model = nullptr;  // may be null for the deterministic case
    const BrownianPath* path = nullptr;
    double alpha = 3.0;
    int lambda = -1;
    bool nonlinearity_on = true;

    // One step from node m to m+1; dt must equal the path step when noise is on.
    void step(ComplexField& X, int m, double dt) const {
        const Grid& g = X.grid;

        if (model && path && model->channels() > 0) {
            // exact unit-modulus noise factor exp(W(t_{m+1}) - W(t_m))
            std::vector<double> dtheta(g.size(), 0.0);
            for (int j = 0; j < model->channels(); ++j) {
                const double db = path->increments[static_cast<std::size_t>(j)]
                                                  [static_cast<std::size_t>(m)];
                if (db == 0.0) continue;
                const auto& ph = model->phi[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < dtheta.size(); ++i) dtheta[i] += db * ph[i];
            }
            for (std::size_t i = 0; i < X.size(); ++i)
                X[i] *= cplx(std::cos(dtheta[i]), std::sin(dtheta[i]));
        }

        if (nonlinearity_on) phase_rotation(X, 0.5 * dt);
        free_flow(X, dt);
        if (nonlinearity_on) phase_rotation(X, 0.5 * dt);

        require_finite(X, (m + 1) * dt);
    }

    void free_flow(ComplexField& X, double dt) const {
        std::vector<cplx> c = fft_forward(X);
        const Grid& g = X.grid;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double phase = g.k2_at(i) * dt;
            c[i] *= cplx(std::cos(phase), std::sin(phase));
        }
        X = fft_inverse(g, std::move(c));
    }

    void phase_rotation(ComplexField& X, double dt) const {
        const double lam = static_cast<double>(lambda);
        for (auto& v : X.values) {
            const double amp = std::abs(v);
            const double phase = -lam * std::pow(amp, alpha - 1.0) * dt;
            v *= cplx(std::cos(phase), std::sin(phase));
        }
    }
};

// ---------------------------------------------------------------------------
// Rescaled method-of-lines step (shared by the solver, the linear propagator
// and the inhomogeneous marches)
// ---------------------------------------------------------------------------

struct RescaledStepper {
    const NoiseModel* model = nullptr;
    const BrownianPath* path = nullptr;
    double alpha = 3.0;
    int lambda = -1;
    bool nonlinearity_on = true;
    bool dealias = true;

    // Optional extra forcing evaluated at (node m, stage fraction): used by
    // the inhomogeneous marches. Returns nullptr when absent.
    using Forcing = std::function<const ComplexField*(int m, double frac)>;
    Forcing forcing;

    // dy/dt at stage (m, frac) for state y.
    ComplexField rhs(const ComplexField& y, int m, double frac) const {
        const Grid& g = y.grid;
        std::vector<cplx> coeffs = fft_forward(y);

        // Delta y and grad y from one forward transform
        std::vector<cplx> lap(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) lap[i] = -g.k2_at(i) * coeffs[i];
        ComplexField lap_y = fft_inverse(g, std::move(lap));

        ComplexField out(g);
        const cplx mi(0.0, -1.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = mi * lap_y[i];

        if (model && path && model->channels() > 0) {
            std::array<int, 3> idx{};
            for (int axis = 0; axis < g.dimension; ++axis) {
                std::vector<cplx> da(coeffs.size());
                for (std::size_t i = 0; i < coeffs.size(); ++i) {
                    g.unflatten(i, idx);
                    da[i] = coeffs[i] *
                            cplx(0.0, g.wavenumber(idx[static_cast<std::size_t>(axis)]));
                }
                ComplexField grad_axis = fft_inverse(g, std::move(da));
                // b_axis = 2i * sum_j dphi_j beta_j : accumulate -i * b * grad
                std::vector<double> breal(g.size(), 0.0);
                for (int j = 0; j < model->channels(); ++j) {
                    const double beta = path->beta_at(j, m, frac);
                    if (beta == 0.0) continue;
                    const auto& dp =
                        model->dphi[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)];
                    for (std::size_t i = 0; i < breal.size(); ++i) breal[i] += 2.0 * beta * dp[i];
                }
                // -i * (i*breal) * grad = breal * grad
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += breal[i] * grad_axis[i];
            }
            // c = -(sum_axis (sum_j dphi beta)^2) + i sum_j lapphi beta
            std::vector<double> sq(g.size(), 0.0);
            std::vector<double> dw(g.size());
            for (int axis = 0; axis < g.dimension; ++axis) {
                std::fill(dw.begin(), dw.end(), 0.0);
                for (int j = 0; j < model->channels(); ++j) {
                    const double beta = path->beta_at(j, m, frac);
                    if (beta == 0.0) continue;
                    const auto& dp =
                        model->dphi[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)];
                    for (std::size_t i = 0; i < dw.size(); ++i) dw[i] += beta * dp[i];
                }
                for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += dw[i] * dw[i];
            }
            std::vector<double> lw(g.size(), 0.0);
            for (int j = 0; j < model->channels(); ++j) {
                const double beta = path->beta_at(j, m, frac);
                if (beta == 0.0) continue;
                const auto& lp = model->lap_phi[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < lw.size(); ++i) lw[i] += beta * lp[i];
            }
            // -i * c * y with c = -sq + i*lw: (-i)(-sq + i lw) y = (i sq + lw) y
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] += cplx(lw[i], sq[i]) * y[i];
        }

        if (nonlinearity_on) {
            ComplexField gnl(g);
            const double lam = static_cast<double>(lambda);
            for (std::size_t i = 0; i < gnl.size(); ++i) {
                const double amp = std::abs(y[i]);
                gnl[i] = std::pow(amp, alpha - 1.0) * y[i];
            }
            if (dealias) gnl = dealias_two_thirds(gnl);
            const cplx factor(0.0, -lam);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += factor * gnl[i];
        }

        if (forcing) {
            if (const ComplexField* f = forcing(m, frac))
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += f->values[i];
        }
        return out;
    }

    // Conservative estimate of ||dt * A|| at node m; refuses the step when the
    // RK4 stability budget would be exceeded.
    void guard(const Grid& g, int m, double dt) const {
        const double kmax = g.max_wavenumber() * std::sqrt(static_cast<double>(g.dimension));
        double bmax = 0.0, cmax = 0.0;
        if (model && path && model->channels() > 0) {
            for (int j = 0; j < model->channels(); ++j) {
                const double beta = std::max(std::abs(path->beta_at(j, m, 0.0)),
                                             std::abs(path->beta_at(j, m, 1.0)));
                bmax += 2.0 * beta * model->max_abs_dphi(j);
                const double dmax = beta * model->max_abs_dphi(j);
                cmax += dmax * dmax + beta * model->max_abs_lap_phi(j);
            }
        }
        const double estimate = dt * (kmax * kmax + bmax * kmax + cmax);
        if (estimate > kStabilityBudget)
            throw StabilityError("stability guard: ||dt*A|| estimate " +
                                 std::to_string(estimate) + " exceeds budget " +
                                 std::to_string(kStabilityBudget) +
                                 " at step " + std::to_string(m) + "; reduce dt");
    }

    void step(ComplexField& y, int m, double dt) const {
        guard(y.grid, m, dt);
        const ComplexField k1 = rhs(y, m, 0.0);
        ComplexField s = y;
        axpy(0.5 * dt, k1, s);
        const ComplexField k2 = rhs(s, m, 0.5);
        s = y;
        axpy(0.5 * dt, k2, s);
        const ComplexField k3 = rhs(s, m, 0.5);
        s = y;
        axpy(dt, k3, s);
        const ComplexField k4 = rhs(s, m, 1.0);
        const double w = dt / 6.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        require_finite(y, (m + 1) * dt);
    }
};

// ---------------------------------------------------------------------------
// Linear propagator U(t, s) of the rescaled generator (nonlinearity off)
// ---------------------------------------------------------------------------

struct Propagator {
    const NoiseModel* model = nullptr;
    const BrownianPath* path = nullptr;

    // Marches dx/dt = A(t)x from node s to node t on the path grid.
    ComplexField apply(const ComplexField& x, int s, int t) const {
        if (s > t) throw std::invalid_argument("propagator: requires s <= t");
        if (!path) throw std::invalid_argument("propagator: missing path");
        if (s < 0 || t > path->steps())
            throw std::out_of_range("propagator: nodes outside the path grid");
        RescaledStepper stepper;
        stepper.model = model;
        stepper.path = path;
        stepper.nonlinearity_on = false;
        ComplexField u = x;
        for (int m = s; m < t; ++m) stepper.step(u, m, path->dt);
        return u;
    }
};

// Marches du/dt = A(t)u + f over `upto` steps starting at path node
// `start_node`, storing every node. `forcing(m, frac, out)` fills the stage
// forcing at absolute path node m.
inline SpaceTimeField
march_inhomogeneous(const ComplexField& x, const NoiseModel* model, const BrownianPath& path,
                    int upto,
                    const std::function<void(int, double, ComplexField&)>& forcing,
                    bool nonlinearity_off = true, double alpha = 3.0, int lambda = -1,
                    int start_node = 0) {
    if (start_node + upto > path.steps())
        throw std::invalid_argument("march: window exceeds the path horizon");
    RescaledStepper stepper;
    stepper.model = model;
    stepper.path = &path;
    stepper.nonlinearity_on = !nonlinearity_off;
    stepper.alpha = alpha;
    stepper.lambda = lambda;

    ComplexField stage_forcing(x.grid);
    if (forcing) {
        stepper.forcing = [&](int m, double frac) -> const ComplexField* {
            forcing(m, frac, stage_forcing);
            return &stage_forcing;
        };
    }

    SpaceTimeField out(x.grid, path.dt, upto + 1);
    ComplexField u = x;
    out.set_slice(0, u);
    for (int m = 0; m < upto; ++m) {
        stepper.step(u, start_node + m, path.dt);
        out.set_slice(m + 1, u);
    }
    return out;
}

}  // namespace snls
