#pragma once

// Space-time fields on a uniform time grid, with the discrete mixed-norm
// conventions used throughout: trapezoid rule in time, max for L^infinity.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "snls/grid.hpp"
#include "snls/spectral.hpp"

namespace snls {

struct SpaceTimeField {
    Grid grid;
    double dt = 0.0;
    int slices = 0;  // M+1 time nodes
    std::vector<cplx> values;  // slice-major: values[m * grid.size() + i]

    SpaceTimeField() = default;
    SpaceTimeField(const Grid& g, double dt_, int slices_)
        : grid(g), dt(dt_), slices(slices_),
          values(static_cast<std::size_t>(slices_) * g.size()) {
        if (slices_ < 1) throw std::invalid_argument("spacetime: need at least one slice");
        if (slices_ > 1 && !(dt_ > 0.0))
            throw std::invalid_argument("spacetime: dt must be positive");
    }

    double time_at(int m) const { return m * dt; }
    std::size_t points() const { return grid.size(); }

    cplx* slice(int m) { return values.data() + static_cast<std::size_t>(m) * points(); }
    const cplx* slice(int m) const {
        return values.data() + static_cast<std::size_t>(m) * points();
    }

    ComplexField field_at(int m) const {
        ComplexField f(grid);
        const cplx* s = slice(m);
        for (std::size_t i = 0; i < points(); ++i) f[i] = s[i];
        return f;
    }
    void set_slice(int m, const ComplexField& f) {
        if (!(f.grid == grid)) throw std::invalid_argument("spacetime: grid mismatch");
        cplx* s = slice(m);
        for (std::size_t i = 0; i < points(); ++i) s[i] = f[i];
    }

    bool is_finite() const {
        for (const cplx& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    SpaceTimeField& operator-=(const SpaceTimeField& o) {
        if (values.size() != o.values.size()) throw std::invalid_argument("spacetime: size mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    SpaceTimeField& operator*=(cplx c) {
        for (auto& v : values) v *= c;
        return *this;
    }
    friend SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
};

// Trapezoid weights over the first `upto+1` nodes.
inline double trapezoid_weight(int m, int upto) {
    return (m == 0 || m == upto) ? 0.5 : 1.0;
}

// || u ||_{L^q(0, t_upto; L^p)} with trapezoid rule in time; q may be infinite.
inline double lq_lp_norm(const SpaceTimeField& u, double q, double p, int upto = -1) {
    if (upto < 0) upto = u.slices - 1;
    if (upto >= u.slices) throw std::invalid_argument("lq_lp_norm: slice range");
    if (std::isinf(q)) {
        double m = 0.0;
        for (int s = 0; s <= upto; ++s) m = std::max(m, lebesgue_norm(u.field_at(s), p));
        return m;
    }
    if (upto == 0) return 0.0;
    double acc = 0.0;
    for (int s = 0; s <= upto; ++s)
        acc += trapezoid_weight(s, upto) * std::pow(lebesgue_norm(u.field_at(s), p), q);
    return std::pow(u.dt * acc, 1.0 / q);
}

// Same norm with a per-slice norm functor (e.g. W^{2,p}).
template <class SliceNorm>
inline double lq_norm_of(const SpaceTimeField& u, double q, SliceNorm&& slice_norm,
                         int upto = -1) {
    if (upto < 0) upto = u.slices - 1;
    if (std::isinf(q)) {
        double m = 0.0;
        for (int s = 0; s <= upto; ++s) m = std::max(m, slice_norm(u.field_at(s)));
        return m;
    }
    if (upto == 0) return 0.0;
    double acc = 0.0;
    for (int s = 0; s <= upto; ++s)
        acc += trapezoid_weight(s, upto) * std::pow(slice_norm(u.field_at(s)), q);
    return std::pow(u.dt * acc, 1.0 / q);
}

// Discrete time derivative: centered differences inside, one-sided at the ends.
inline SpaceTimeField time_derivative(const SpaceTimeField& u) {
    SpaceTimeField out(u.grid, u.dt, u.slices);
    if (u.slices == 1) return out;
    const std::size_t n = u.points();
    for (int m = 0; m < u.slices; ++m) {
        const int lo = std::max(0, m - 1);
        const int hi = std::min(u.slices - 1, m + 1);
        const double inv = 1.0 / ((hi - lo) * u.dt);
        const cplx* a = u.slice(lo);
        const cplx* b = u.slice(hi);
        cplx* o = out.slice(m);
        for (std::size_t i = 0; i < n; ++i) o[i] = (b[i] - a[i]) * inv;
    }
    return out;
}

}  // namespace snls
