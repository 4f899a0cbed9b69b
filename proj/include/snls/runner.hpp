#pragma once

// Drives the configured solvers over [0, T] and assembles the RunRecord.
// Deterministic for a fixed (config, seed): the Brownian path, both solvers
// and all recorded series are pure functions of the configuration.

#include <chrono>
#include <optional>

#include "snls/config.hpp"
#include "snls/diagnostics.hpp"
#include "snls/dynamics.hpp"
#include "snls/record.hpp"

namespace snls {

// refine > 0 halves dt that many times, bridge-refining the Brownian path so
// every level is driven by the same underlying motion.
inline RunRecord run(const RunConfig& cfg, int refine = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid grid = cfg.grid();
    NoiseModel model(grid, cfg.noise);
    BrownianPath path = sample_path(model.channels(), cfg.T, cfg.dt, cfg.seed);
    path = refine_path(std::move(path), refine);
    const double dt = path.dt;
    const int steps = path.steps();

    RunRecord record;
    record.config = cfg;
    record.path = path;

    const ComplexField x = build_initial(cfg.initial, grid);
    record.boundary_max = boundary_decay(cfg.initial, x);
    if (record.boundary_max && *record.boundary_max > 1e-12)
        record.config.warnings.push_back(
            "initial data does not decay below 1e-12 at the box boundary (max " +
            format_double(*record.boundary_max) + "); enlarge L for a faithful R^d surrogate");

    const bool want_direct = cfg.formulation != RunConfig::Formulation::rescaled;
    const bool want_rescaled = cfg.formulation != RunConfig::Formulation::direct;
    const bool both = want_direct && want_rescaled;

    DirectStepper direct;
    direct.model = &model;
    direct.path = &record.path;
    direct.alpha = cfg.alpha;
    direct.lambda = cfg.lambda;

    RescaledStepper rescaled;
    rescaled.model = &model;
    rescaled.path = &record.path;
    rescaled.alpha = cfg.alpha;
    rescaled.lambda = cfg.lambda;

    ComplexField X = x;
    ComplexField y = x;

    const bool keep = cfg.keep_fields || both;
    if (keep) {
        if (want_direct) record.fields_direct.emplace(grid, dt, steps + 1);
        if (want_rescaled) record.fields_rescaled.emplace(grid, dt, steps + 1);
    }

    const auto record_slice = [&](int m) {
        const ComplexField& primary = want_direct ? X : y;
        record.t.push_back(m * dt);
        record.mass.push_back(lebesgue_norm(primary, 2.0));
        record.h1.push_back(sobolev_norm(primary, 1.0));
        record.h2.push_back(sobolev_norm(primary, 2.0));
        record.linf.push_back(lebesgue_norm(primary, infinity()));
        if (both) {
            const auto theta = model.theta_at(record.path, m);
            double sum = 0.0;
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const cplx ew(std::cos(theta[i]), std::sin(theta[i]));
                sum += std::norm(ew * y[i] - X[i]);
            }
            record.equiv_err.push_back(std::sqrt(grid.cell_volume() * sum));
        }
        if (keep) {
            if (record.fields_direct) record.fields_direct->set_slice(m, X);
            if (record.fields_rescaled) record.fields_rescaled->set_slice(m, y);
        }
        if (cfg.snapshot_stride > 0 && m % cfg.snapshot_stride == 0)
            record.snapshots.push_back({m, m * dt, want_direct ? X : y});
    };

    record_slice(0);
    for (int m = 0; m < steps; ++m) {
        try {
            if (want_direct) direct.step(X, m, dt);
            if (want_rescaled) rescaled.step(y, m, dt);
        } catch (const BlowupSuspected& b) {
            record.blowup_time = b.time;
            break;
        }
        record_slice(m + 1);
    }

    record.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return record;
}

// Max L^2 trajectory distance between two independent integrations of the
// same configuration. Determinism makes this exactly zero; the probe guards
// the concurrency contract (thread schedules must not leak into results).
inline double uniqueness_probe(const RunConfig& cfg, int refine = 0) {
    RunConfig probe = cfg;
    probe.keep_fields = true;
    const RunRecord a = run(probe, refine);
    const RunRecord b = run(probe, refine);
    const auto& ta = a.fields_rescaled ? *a.fields_rescaled : *a.fields_direct;
    const auto& tb = b.fields_rescaled ? *b.fields_rescaled : *b.fields_direct;
    return trajectory_distance(ta, tb);
}

}  // namespace snls
