#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snls/rng.hpp"
#include "snls/spectral.hpp"

#include <cmath>

using namespace snls;

namespace {

ComplexField random_field(const Grid& g, std::uint64_t seed) {
    ComplexField f(g);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = cplx(normal(seed, stream_id(90, 0), i), normal(seed, stream_id(90, 1), i));
    return f;
}

ComplexField plane_wave(const Grid& g, int mode) {
    ComplexField f(g);
    const double k = mode * 3.14159265358979323846 / g.box_half_length;
    for (int i = 0; i < g.points_per_axis; ++i) {
        const double xi = g.coordinate(i);
        f[static_cast<std::size_t>(i)] = cplx(std::cos(k * xi), std::sin(k * xi));
    }
    return f;
}

}  // namespace

TEST_CASE("constant field concentrates at the zero mode") {
    const Grid g(1, 16, 5.0);
    ComplexField f(g);
    for (auto& v : f.values) v = cplx(1.0, 0.0);
    const auto c = fft_forward(f);
    CHECK(std::abs(c[0] - cplx(16.0, 0.0)) < 1e-12);
    for (std::size_t m = 1; m < c.size(); ++m) CHECK(std::abs(c[m]) < 1e-12);
}

TEST_CASE("round trip is the identity to 1e-12 relative") {
    for (int d : {1, 2, 3}) {
        const Grid g(d, d == 1 ? 64 : 16, 3.0);
        const ComplexField f = random_field(g, 7);
        const ComplexField back = fft_inverse(g, fft_forward(f));
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            err = std::max(err, std::abs(back[i] - f[i]));
            scale = std::max(scale, std::abs(f[i]));
        }
        CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("plane wave transforms to a single coefficient (direct-sum oracle)") {
    const Grid g(1, 16, 5.0);
    const ComplexField f = plane_wave(g, 1);
    const auto c = fft_forward(f);

    // oracle: the plain definition evaluated term by term
    std::vector<cplx> oracle(16, cplx(0, 0));
    for (int m = 0; m < 16; ++m)
        for (int i = 0; i < 16; ++i) {
            const double angle = -2.0 * 3.14159265358979323846 * m * i / 16.0;
            oracle[static_cast<std::size_t>(m)] +=
                f[static_cast<std::size_t>(i)] * cplx(std::cos(angle), std::sin(angle));
        }
    for (int m = 0; m < 16; ++m)
        CHECK(std::abs(c[static_cast<std::size_t>(m)] - oracle[static_cast<std::size_t>(m)]) <
              1e-10);
    // single nonzero coefficient at mode 1
    for (int m = 0; m < 16; ++m) {
        const double mag = std::abs(c[static_cast<std::size_t>(m)]);
        if (m == 1)
            CHECK(mag == doctest::Approx(16.0).epsilon(1e-12));
        else
            CHECK(mag < 1e-10);
    }
}

TEST_CASE("fft size mismatch is rejected") {
    const Grid g(1, 16, 5.0);
    CHECK_THROWS(fft_inverse(g, std::vector<cplx>(15)));
    CHECK_THROWS(ComplexField(g, std::vector<cplx>(17)));
}

TEST_CASE("derivative multipliers: constants and eigenfunctions") {
    const Grid g(1, 32, 4.0);
    ComplexField c0(g);
    for (auto& v : c0.values) v = cplx(2.5, -1.0);
    const ComplexField lap = laplacian(c0);
    const auto grad = gradient(c0);
    for (std::size_t i = 0; i < c0.size(); ++i) {
        CHECK(std::abs(lap[i]) < 1e-12);
        CHECK(std::abs(grad[0][i]) < 1e-12);
    }

    const ComplexField pw = plane_wave(g, 1);
    const double k = 3.14159265358979323846 / 4.0;
    const ComplexField lap_pw = laplacian(pw);
    for (std::size_t i = 0; i < pw.size(); ++i)
        CHECK(std::abs(lap_pw[i] + k * k * pw[i]) < 1e-11);
}

TEST_CASE("laplacian agrees with centered finite differences on a Gaussian") {
    const double L = 10.0;
    double prev_err = 0.0;
    for (int n : {64, 128, 256}) {
        const Grid g(1, n, L);
        ComplexField f(g);
        for (int i = 0; i < n; ++i) {
            const double xi = g.coordinate(i);
            f[static_cast<std::size_t>(i)] = std::exp(-xi * xi);
        }
        const ComplexField lap = laplacian(f);
        const double h = g.spacing();
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto ip = static_cast<std::size_t>((i + 1) % n);
            const auto im = static_cast<std::size_t>((i - 1 + n) % n);
            const cplx fd = (f[ip] - 2.0 * f[static_cast<std::size_t>(i)] + f[im]) / (h * h);
            err = std::max(err, std::abs(fd - lap[static_cast<std::size_t>(i)]));
        }
        if (prev_err > 0.0) CHECK(err < 0.35 * prev_err);  // better than O(h^2) decay
        prev_err = err;
    }
}

TEST_CASE("laplacian equals divergence of gradient") {
    const Grid g(2, 32, 3.0);
    const ComplexField f = random_field(g, 11);
    const ComplexField lap = laplacian(f);
    const auto grad = gradient(f);
    ComplexField div(g);
    for (int axis = 0; axis < 2; ++axis) {
        const auto d2 = gradient(grad[static_cast<std::size_t>(axis)]);
        div += d2[static_cast<std::size_t>(axis)];
    }
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        err = std::max(err, std::abs(div[i] - lap[i]));
        scale = std::max(scale, std::abs(lap[i]));
    }
    CHECK(err <= 1e-10 * std::max(scale, 1.0));
}

TEST_CASE("mixed plane wave in three dimensions is a Laplacian eigenfunction") {
    const Grid g(3, 16, 4.0);
    const double pi_over_L = 3.14159265358979323846 / 4.0;
    const int mode[3] = {2, -1, 3};
    ComplexField f(g);
    std::array<double, 3> xi{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, xi);
        double phase = 0.0;
        for (int d = 0; d < 3; ++d) phase += mode[d] * pi_over_L * xi[static_cast<std::size_t>(d)];
        f[i] = cplx(std::cos(phase), std::sin(phase));
    }
    const double k2 = (4.0 + 1.0 + 9.0) * pi_over_L * pi_over_L;
    const ComplexField lap = laplacian(f);
    const auto grad = gradient(f);
    double err = 0.0, gerr = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        err = std::max(err, std::abs(lap[i] + k2 * f[i]));
        gerr = std::max(gerr, std::abs(grad[1][i] - cplx(0.0, -pi_over_L) * f[i]));
    }
    CHECK(err < 1e-10);
    CHECK(gerr < 1e-11);
}

TEST_CASE("Gaussian L2 norm matches the analytic integral") {
    const Grid g(1, 512, 20.0);
    ComplexField f(g);
    for (int i = 0; i < 512; ++i) {
        const double xi = g.coordinate(i);
        f[static_cast<std::size_t>(i)] = std::exp(-xi * xi);
    }
    const double expected = std::pow(3.14159265358979323846 / 2.0, 0.25);
    CHECK(std::abs(lebesgue_norm(f, 2.0) - expected) < 1e-8);
}

TEST_CASE("zero field has zero norm for every (s, p)") {
    const Grid g(1, 32, 4.0);
    const ComplexField z(g);
    for (double s : {0.0, 1.0, 1.5, 2.0})
        for (double p : {1.0, 2.0, 4.0, infinity()}) CHECK(wsp_norm(z, s, p) == 0.0);
}

TEST_CASE("sobolev_norm at s = 0 is the L2 norm") {
    const Grid g(1, 64, 6.0);
    const ComplexField f = random_field(g, 3);
    CHECK(sobolev_norm(f, 0.0) ==
          doctest::Approx(lebesgue_norm(f, 2.0)).epsilon(1e-12));
}

TEST_CASE("Parseval identity") {
    const Grid g(2, 32, 2.0);
    const ComplexField f = random_field(g, 5);
    const auto c = fft_forward(f);
    double spec = 0.0;
    for (const auto& v : c) spec += std::norm(v);
    const double from_spec = std::sqrt(g.cell_volume() / static_cast<double>(g.size()) * spec);
    CHECK(std::abs(from_spec - lebesgue_norm(f, 2.0)) <= 1e-12 * from_spec);
}

TEST_CASE("norm homogeneity under scalar multiplication") {
    const Grid g(1, 64, 5.0);
    const ComplexField f = random_field(g, 9);
    const cplx scalars[] = {cplx(2.0, 0.0), cplx(0.0, -3.5), cplx(1.25, 0.75)};
    for (const cplx c : scalars) {
        ComplexField cf = f;
        cf *= c;
        const double mag = std::abs(c);
        for (double p : {1.0, 2.0, 3.0, infinity()})
            CHECK(lebesgue_norm(cf, p) ==
                  doctest::Approx(mag * lebesgue_norm(f, p)).epsilon(1e-12));
        for (double s : {0.5, 1.0, 2.0}) {
            CHECK(sobolev_norm(cf, s) ==
                  doctest::Approx(mag * sobolev_norm(f, s)).epsilon(1e-12));
            CHECK(wsp_norm(cf, s, 3.0) ==
                  doctest::Approx(mag * wsp_norm(f, s, 3.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sobolev norms are monotone in the order") {
    const Grid g(1, 64, 5.0);
    const ComplexField f = random_field(g, 13);
    double prev = 0.0;
    for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        const double v = sobolev_norm(f, s);
        CHECK(v >= prev * (1.0 - 1e-13));
        prev = v;
    }
}

TEST_CASE("invalid norm parameters are rejected") {
    const Grid g(1, 16, 1.0);
    const ComplexField f(g);
    CHECK_THROWS(lebesgue_norm(f, 0.5));
    CHECK_THROWS(sobolev_norm(f, -1.0));
    CHECK_THROWS(sobolev_norm(f, 2.5));
    CHECK_THROWS(wsp_norm(f, 1.0, 0.0));
}

TEST_CASE("Bessel form matches the derivative-sum form exactly at p = 2") {
    const Grid g(2, 32, 3.0);
    const ComplexField f = random_field(g, 21);
    const auto grad = gradient(f);
    const ComplexField lap = laplacian(f);
    const double l2 = lebesgue_norm(f, 2.0);
    double grad2 = 0.0;
    for (const auto& gax : grad) {
        const double v = lebesgue_norm(gax, 2.0);
        grad2 += v * v;
    }
    const double lap2 = lebesgue_norm(lap, 2.0);

    const double h1 = sobolev_norm(f, 1.0);
    CHECK(h1 * h1 == doctest::Approx(l2 * l2 + grad2).epsilon(1e-11));
    const double h2 = sobolev_norm(f, 2.0);
    CHECK(h2 * h2 == doctest::Approx(l2 * l2 + 2.0 * grad2 + lap2 * lap2).epsilon(1e-11));
}

TEST_CASE("Bessel and derivative-sum W^{1,p} stay comparable off p = 2") {
    const Grid g(1, 128, 8.0);
    ComplexField f(g);
    for (int i = 0; i < 128; ++i) {
        const double xi = g.coordinate(i);
        f[static_cast<std::size_t>(i)] = cplx(std::exp(-xi * xi), 0.3 * std::sin(xi));
    }
    for (double p : {1.5, 3.0, 4.0}) {
        const double bessel = wsp_norm(f, 1.0, p);
        double deriv_sum = lebesgue_norm(f, p);
        for (const auto& gax : gradient(f)) deriv_sum += lebesgue_norm(gax, p);
        CHECK(bessel < 4.0 * deriv_sum);
        CHECK(deriv_sum < 4.0 * bessel);
    }
}

TEST_CASE("dealiasing removes the top third of modes and only that") {
    const Grid g(1, 32, 4.0);
    const ComplexField f = random_field(g, 31);
    const ComplexField clean = dealias_two_thirds(f);
    const auto c = fft_forward(clean);
    const auto c0 = fft_forward(f);
    for (int i = 0; i < 32; ++i) {
        const int m = g.signed_mode(i);
        if (std::abs(m) >= 32 / 3)
            CHECK(std::abs(c[static_cast<std::size_t>(i)]) < 1e-10);
        else
            CHECK(std::abs(c[static_cast<std::size_t>(i)] - c0[static_cast<std::size_t>(i)]) <
                  1e-10);
    }
}
