#pragma once

// Periodic box [-L, L)^d standing in for R^d, with the symmetric wavenumber
// layout k = m*pi/L, m in {-n/2, ..., n/2-1} per axis. Spectral arrays use the
// natural DFT index order; signed_mode() maps an index to its integer mode m.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "snls/fft.hpp"

namespace snls {

struct Grid {
    int dimension = 1;         // d in {1,2,3}
    int points_per_axis = 16;  // n, power of two, >= 16
    double box_half_length = 1.0;

    Grid() = default;
    Grid(int d, int n, double L) : dimension(d), points_per_axis(n), box_half_length(L) {
        if (d < 1 || d > 3) throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
        if (n < 16 || (n & (n - 1)) != 0)
            throw std::invalid_argument("grid: points per axis must be a power of two >= 16");
        if (!(L > 0.0)) throw std::invalid_argument("grid: box half-length must be positive");
    }

    double spacing() const { return 2.0 * box_half_length / points_per_axis; }
    double cell_volume() const { return std::pow(spacing(), dimension); }
    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dimension; ++d) s *= static_cast<std::size_t>(points_per_axis);
        return s;
    }

    // Physical coordinate along one axis.
    double coordinate(int i) const { return -box_half_length + i * spacing(); }

    // Signed integer mode for a DFT index along one axis.
    int signed_mode(int i) const { return i < points_per_axis / 2 ? i : i - points_per_axis; }

    // Wavenumber along one axis for a DFT index.
    double wavenumber(int i) const {
        return signed_mode(i) * 3.14159265358979323846 / box_half_length;
    }
    double max_wavenumber() const {
        return (points_per_axis / 2) * 3.14159265358979323846 / box_half_length;
    }

    void unflatten(std::size_t flat, std::array<int, 3>& idx) const {
        for (int d = dimension - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % points_per_axis);
            flat /= static_cast<std::size_t>(points_per_axis);
        }
        for (int d = dimension; d < 3; ++d) idx[static_cast<std::size_t>(d)] = 0;
    }

    // |k|^2 at a flat spectral index.
    double k2_at(std::size_t flat) const {
        std::array<int, 3> idx{};
        unflatten(flat, idx);
        double s = 0.0;
        for (int d = 0; d < dimension; ++d) {
            const double k = wavenumber(idx[static_cast<std::size_t>(d)]);
            s += k * k;
        }
        return s;
    }

    // Physical point at a flat index.
    void point(std::size_t flat, std::array<double, 3>& xi) const {
        std::array<int, 3> idx{};
        unflatten(flat, idx);
        for (int d = 0; d < 3; ++d) xi[static_cast<std::size_t>(d)] = coordinate(idx[static_cast<std::size_t>(d)]);
        for (int d = dimension; d < 3; ++d) xi[static_cast<std::size_t>(d)] = 0.0;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.dimension == b.dimension && a.points_per_axis == b.points_per_axis &&
               a.box_half_length == b.box_half_length;
    }
};

struct ComplexField {
    Grid grid;
    std::vector<cplx> values;

    ComplexField() = default;
    explicit ComplexField(const Grid& g) : grid(g), values(g.size()) {}
    ComplexField(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) throw std::invalid_argument("field: size mismatch");
    }

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    bool is_finite() const {
        for (const cplx& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    ComplexField& operator+=(const ComplexField& o) {
        check_same(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    ComplexField& operator-=(const ComplexField& o) {
        check_same(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    ComplexField& operator*=(cplx c) {
        for (auto& v : values) v *= c;
        return *this;
    }

    friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
    friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
    friend ComplexField operator*(cplx c, ComplexField a) { return a *= c; }

    void check_same(const ComplexField& o) const {
        if (!(grid == o.grid)) throw std::invalid_argument("field: grid mismatch");
    }
};

// y += a*x
inline void axpy(cplx a, const ComplexField& x, ComplexField& y) {
    y.check_same(x);
    for (std::size_t i = 0; i < y.size(); ++i) y.values[i] += a * x.values[i];
}

}  // namespace snls
