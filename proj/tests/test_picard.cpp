#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snls/diagnostics.hpp"
#include "snls/picard.hpp"

#include <cstdlib>

#include <cmath>

using namespace snls;

namespace {

ComplexField gaussian_field(const Grid& g, double amp, double width) {
    ComplexField f(g);
    std::array<double, 3> xi{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, xi);
        double r2 = 0.0;
        for (int d = 0; d < g.dimension; ++d)
            r2 += xi[static_cast<std::size_t>(d)] * xi[static_cast<std::size_t>(d)];
        f[i] = amp * std::exp(-r2 / (width * width));
    }
    return f;
}

const Grid kGrid(1, 64, 10.0);

NoiseModel small_model() {
    return NoiseModel(kGrid, {ProfileSpec{0.25, {0.0, 0.0, 0.0}, 2.0}});
}

StrichartzPair step1_pair() { return proof_pair(1, Rational(3), PairContext::step1); }

}  // namespace

TEST_CASE("pointwise nonlinearity inequality holds on random complex pairs") {
    for (double alpha : {2.0, 2.5, 3.0, 3.5}) {
        ComplexField y1(kGrid), y2(kGrid);
        for (std::size_t i = 0; i < kGrid.size(); ++i) {
            y1[i] = cplx(normal(5, stream_id(70, 0), i), normal(5, stream_id(70, 1), i));
            y2[i] = cplx(normal(5, stream_id(70, 2), i), normal(5, stream_id(70, 3), i));
        }
        CHECK(pointwise_g_lipschitz_check(y1, y2, alpha));
        // y2 = 0 reduces to |g(y1)| <= alpha |y1|^alpha
        ComplexField zero(kGrid);
        CHECK(pointwise_g_lipschitz_check(y1, zero, alpha));
        // y1 = y2 reduces to 0 <= 0
        CHECK(pointwise_g_lipschitz_check(y1, y1, alpha));
    }
}

TEST_CASE("duhamel map: homogeneous case reduces to the propagator") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.1, 5e-3, 61);
    const ComplexField x = gaussian_field(kGrid, 0.5, 2.0);
    SpaceTimeField y(kGrid, path.dt, path.steps() + 1);  // arbitrary content
    for (int m = 0; m <= path.steps(); ++m) y.set_slice(m, x);

    const SpaceTimeField hom =
        duhamel_map(x, y, &model, path, path.steps(), 3.0, -1, /*hook off*/ true);
    const Propagator U{&model, &path};
    for (int m : {0, 5, 20}) {
        const ComplexField direct = U.apply(x, 0, m);
        ComplexField diff = hom.field_at(m);
        diff -= direct;
        CHECK(lebesgue_norm(diff, 2.0) < 1e-12);
    }
}

TEST_CASE("duhamel map of zero data and zero trajectory is zero") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.1, 5e-3, 67);
    const ComplexField zero(kGrid);
    SpaceTimeField y(kGrid, path.dt, path.steps() + 1);
    const SpaceTimeField f = duhamel_map(zero, y, &model, path, path.steps(), 3.0, -1);
    for (const auto& v : f.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("with the nonlinear hook off the map is insensitive to the trajectory") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.1, 5e-3, 71);
    const ComplexField x = gaussian_field(kGrid, 0.5, 2.0);
    SpaceTimeField y1(kGrid, path.dt, path.steps() + 1);
    SpaceTimeField y2(kGrid, path.dt, path.steps() + 1);
    for (int m = 0; m <= path.steps(); ++m) {
        y1.set_slice(m, gaussian_field(kGrid, 0.3, 1.0));
        y2.set_slice(m, gaussian_field(kGrid, 0.9, 3.0));
    }
    const SpaceTimeField f1 = duhamel_map(x, y1, &model, path, path.steps(), 3.0, -1, true);
    const SpaceTimeField f2 = duhamel_map(x, y2, &model, path, path.steps(), 3.0, -1, true);
    for (std::size_t i = 0; i < f1.values.size(); ++i) CHECK(f1.values[i] == f2.values[i]);
}

TEST_CASE("solver trajectory is an approximate fixed point, defect order >= 1") {
    const NoiseModel model = small_model();
    std::vector<double> dts, defects;
    BrownianPath path = sample_path(1, 0.1, 4e-3, 73);
    const ComplexField x = gaussian_field(kGrid, 0.5, 2.0);
    for (int level = 0; level < 3; ++level) {
        RescaledStepper stepper;
        stepper.model = &model;
        stepper.path = &path;
        stepper.alpha = 3.0;
        stepper.lambda = -1;
        SpaceTimeField traj(kGrid, path.dt, path.steps() + 1);
        ComplexField y = x;
        traj.set_slice(0, y);
        for (int m = 0; m < path.steps(); ++m) {
            stepper.step(y, m, path.dt);
            traj.set_slice(m + 1, y);
        }
        const SpaceTimeField mapped = duhamel_map(x, traj, &model, path, path.steps(), 3.0, -1);
        double defect = 0.0;
        for (int m = 0; m <= path.steps(); ++m) {
            ComplexField diff = mapped.field_at(m);
            diff -= traj.field_at(m);
            defect = std::max(defect, lebesgue_norm(diff, 2.0));
        }
        dts.push_back(path.dt);
        defects.push_back(defect);
        path = refine_path(path);
    }
    CHECK(defects[1] < defects[0]);
    CHECK(defects[2] < defects[1]);
    CHECK(fit_loglog_slope(dts, defects) >= 1.0);
}

TEST_CASE("empirical constant: free flow with the (2, inf) pair gives ratio 1") {
    const NoiseModel model(kGrid, {});
    const BrownianPath path = sample_path(0, 0.05, 2.5e-3, 3);
    const StrichartzPair pair{Rational(2), Rational::inf(), 1};
    const EmpiricalConstant c =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 3, 77);
    CHECK(c.value() == doctest::Approx(1.0).epsilon(1e-6));
    for (std::size_t m = 1; m < c.curve.size(); ++m) CHECK(c.curve[m] >= c.curve[m - 1]);
}

TEST_CASE("empirical constant estimator is monotone in samples and in time") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.1, 5e-3, 79);
    const StrichartzPair pair = step1_pair();
    const EmpiricalConstant c16 =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 16, 81);
    const EmpiricalConstant c32 =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 32, 81);
    CHECK(c32.value() >= c16.value());
    CHECK(std::isfinite(c32.value()));
    for (std::size_t m = 1; m < c32.curve.size(); ++m) CHECK(c32.curve[m] >= c32.curve[m - 1]);
    CHECK_THROWS(estimate_strichartz_constant(&model, path, path.steps(),
                                              StrichartzPair{Rational(3), Rational(11), 1}, pair,
                                              4, 1));
}

TEST_CASE("ball and stopping time: zero data gives M1 = 0, tau1 full on short horizons") {
    // with x = 0 the Z-process reduces to its data-independent term C t^alpha,
    // so on a horizon with C T^alpha <= 1/2 the rule never stops early
    EmpiricalConstant chat;
    chat.curve.assign(11, 1.0);  // T = 0.5 at dt = 0.05: Z(T) = 0.125
    const TrajectoryBall ball =
        ball_and_stopping_time(0.0, 3.0, chat, 0.05, 5.0 / 6.0, step1_pair());
    CHECK(ball.tau_index == 10);
    CHECK(ball.radius == 0.0);
    // on a long horizon the residual term does stop the clock
    chat.curve.assign(41, 1.0);  // T = 2.0: Z(t) = t^3 crosses 1/2 at t ~ 0.7937
    const TrajectoryBall longer =
        ball_and_stopping_time(0.0, 3.0, chat, 0.05, 5.0 / 6.0, step1_pair());
    CHECK(longer.tau_index == 16);  // first grid point past 0.7937
    CHECK(longer.radius == 0.0);
}

TEST_CASE("stopping-time rule matches a scalar root-bracketing oracle") {
    // C == 1, |x|_{H2} = 1, alpha = 3, theta = 5/6:
    // Z(t) = 16 (t^{5/6} + t + t^3) + 2 t^3
    EmpiricalConstant chat;
    const double dt = 1e-3;
    chat.curve.assign(1001, 1.0);
    const TrajectoryBall ball = ball_and_stopping_time(1.0, 3.0, chat, dt, 5.0 / 6.0, step1_pair());

    auto z = [](double t) {
        return 16.0 * (std::pow(t, 5.0 / 6.0) + t + t * t * t) + 2.0 * t * t * t;
    };
    // oracle: bisection for z(t) = 1/2
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (z(mid) > 0.5 ? hi : lo) = mid;
    }
    const int expected = static_cast<int>(std::ceil(hi / dt));
    CHECK(std::abs(ball.tau_index - expected) <= 1);
    CHECK(ball.radius == doctest::Approx(2.0 * (1.0 + 1.0)).epsilon(1e-12));
    // Z is increasing in |x|_{H2}: larger data never extends tau1
    const TrajectoryBall bigger =
        ball_and_stopping_time(2.0, 3.0, chat, dt, 5.0 / 6.0, step1_pair());
    CHECK(bigger.tau_index <= ball.tau_index);
}

TEST_CASE("z-process is nondecreasing in t, data size, and constant") {
    for (double t : {0.1, 0.2, 0.5}) {
        CHECK(z_process(t + 0.1, 1.0, 3.0, 1.0, 5.0 / 6.0) >=
              z_process(t, 1.0, 3.0, 1.0, 5.0 / 6.0));
        CHECK(z_process(t, 1.5, 3.0, 1.0, 5.0 / 6.0) >= z_process(t, 1.0, 3.0, 1.0, 5.0 / 6.0));
        CHECK(z_process(t, 1.0, 3.0, 1.3, 5.0 / 6.0) >= z_process(t, 1.0, 3.0, 1.0, 5.0 / 6.0));
    }
}

TEST_CASE("measured contraction is small on a mild scenario and Picard converges") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.2, 5e-3, 83);
    const ComplexField x = gaussian_field(kGrid, 0.25, 2.0);
    const double x_h2 = sobolev_norm(x, 2.0);

    const StrichartzPair pair = step1_pair();
    const double theta = theta_gap(pair.q).to_double();
    const EmpiricalConstant chat =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 12, 85);
    const TrajectoryBall ball = ball_and_stopping_time(x_h2, 3.0, chat, path.dt, theta, pair);
    REQUIRE(ball.tau_index >= 4);

    const ContractionReport rep = measure_contraction(x, ball, &model, path, 3.0, -1, 6, 87);
    CHECK(rep.kappa_hat > 0.0);
    CHECK(rep.kappa_hat <= 0.6);

    const PicardRun run = picard_iterate(x, ball, &model, path, 3.0, -1, 8);
    REQUIRE(run.increments.size() >= 3);
    for (std::size_t n = 1; n < run.increments.size(); ++n)
        CHECK(run.increments[n] < run.increments[n - 1]);

    // the converged iterate solves the equation: compare with the solver
    RescaledStepper stepper;
    stepper.model = &model;
    stepper.path = &path;
    stepper.alpha = 3.0;
    stepper.lambda = -1;
    ComplexField y = x;
    double sup = 0.0;
    for (int m = 0; m <= ball.tau_index; ++m) {
        ComplexField diff = run.iterate.field_at(m);
        diff -= y;
        sup = std::max(sup, lebesgue_norm(diff, 2.0));
        if (m < ball.tau_index) stepper.step(y, m, path.dt);
    }
    CHECK(sup < 1e-3);
}

TEST_CASE("sampled estimators are identical across thread counts") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.1, 5e-3, 97);
    const StrichartzPair pair = step1_pair();
    ::setenv("SNLS_THREADS", "1", 1);
    const EmpiricalConstant c1 =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 8, 3);
    ::setenv("SNLS_THREADS", "3", 1);
    const EmpiricalConstant c3 =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 8, 3);
    ::unsetenv("SNLS_THREADS");
    CHECK(c1.curve == c3.curve);
    CHECK(c1.per_sample == c3.per_sample);
}

TEST_CASE("re-started construction step continues the solver trajectory") {
    const NoiseModel model = small_model();
    const BrownianPath path = sample_path(1, 0.4, 5e-3, 101);
    // data large enough that the first stopping time lands inside the horizon
    const ComplexField x = gaussian_field(kGrid, 0.9, 2.0);
    const double x_h2 = sobolev_norm(x, 2.0);
    const StrichartzPair pair = step1_pair();
    const double theta = theta_gap(pair.q).to_double();
    const EmpiricalConstant chat =
        estimate_strichartz_constant(&model, path, path.steps(), pair, pair, 12, 103);
    const TrajectoryBall first = ball_and_stopping_time(x_h2, 3.0, chat, path.dt, theta, pair);
    REQUIRE(first.tau_index < path.steps());
    REQUIRE(first.tau_index >= 2);

    const PicardRun leg1 = picard_iterate(x, first, &model, path, 3.0, -1, 10);
    const ComplexField y_tau = leg1.iterate.field_at(first.tau_index);
    const RestartResult leg2 = picard_restart(y_tau, 3.0, chat, first, &model, path, -1, 10);
    REQUIRE(leg2.ball.tau_index >= 1);
    CHECK(leg2.ball.radius > 0.0);

    // reference: one uninterrupted solver march across both windows
    RescaledStepper stepper;
    stepper.model = &model;
    stepper.path = &path;
    stepper.alpha = 3.0;
    stepper.lambda = -1;
    ComplexField y = x;
    for (int m = 0; m < first.tau_index; ++m) stepper.step(y, m, path.dt);
    ComplexField diff0 = leg2.run.iterate.field_at(0);
    diff0 -= y;
    CHECK(lebesgue_norm(diff0, 2.0) < 1e-6);  // the glue point is the stored state
    for (int m = 0; m < leg2.ball.tau_index; ++m)
        stepper.step(y, first.tau_index + m, path.dt);
    ComplexField diff = leg2.run.iterate.field_at(leg2.ball.tau_index);
    diff -= y;
    CHECK(lebesgue_norm(diff, 2.0) < 1e-5);
}

TEST_CASE("ball membership scales correctly and rejects oversized fields") {
    const BrownianPath path = sample_path(1, 0.1, 5e-3, 89);
    TrajectoryBall ball;
    ball.pair = step1_pair();
    ball.theta = theta_gap(ball.pair.q).to_double();
    ball.tau_index = path.steps();
    ball.tau = 0.1;
    ball.radius = 1.0;
    const SpaceTimeField member = sample_ball_member(ball, kGrid, path.dt, 91, 0);
    CHECK(ball.contains(member));
    SpaceTimeField big = member;
    big *= cplx(10.0, 0.0);
    CHECK_FALSE(ball.contains(big));
    // bundle norm is homogeneous
    CHECK(ball.bundle_norm(big) ==
          doctest::Approx(10.0 * ball.bundle_norm(member)).epsilon(1e-10));
}
