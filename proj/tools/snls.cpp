// Command-line front end: simulation, verification, refinement studies, the
// fixed-point laboratory, and exact exponent tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "snls/diagnostics.hpp"
#include "snls/dyadic.hpp"
#include "snls/picard.hpp"
#include "snls/record.hpp"
#include "snls/runner.hpp"

namespace fs = std::filesystem;
using namespace snls;

namespace {

RunConfig load_config(const std::string& path, std::uint64_t* seed_override,
                      const std::string& out_override) {
    std::string text = "{}";
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config " + path);
        text.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    RunConfig cfg = parse_config(text);
    if (seed_override) cfg.seed = *seed_override;
    if (!out_override.empty()) cfg.output_dir = out_override;
    return cfg;
}

void print_warnings(const RunConfig& cfg) {
    for (const auto& w : cfg.warnings) std::cout << "warning: " << w << "\n";
}

void write_text_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << text;
}

int report_checks(const std::vector<CheckResult>& checks, const std::string& out_dir) {
    bool all_pass = true;
    std::string csv = "name,metric,threshold,pass\n";
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        const std::string slope_text = c.slope ? (" slope=" + format_double(*c.slope)) : "";
        const std::string note_text = c.note.empty() ? "" : ("  [" + c.note + "]");
        std::printf("%-28s metric=%-13.6g threshold=%-10.4g %s%s%s\n", c.name.c_str(), c.metric,
                    c.threshold, c.pass ? "pass" : "FAIL", slope_text.c_str(), note_text.c_str());
        csv += c.name + "," + format_double(c.metric) + "," + format_double(c.threshold) + "," +
               (c.pass ? "1" : "0") + "\n";
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["metric"] = c.metric;
        cj["threshold"] = c.threshold;
        cj["pass"] = c.pass;
        if (c.slope) cj["slope"] = *c.slope;
        if (c.slope_floor) cj["slope_floor"] = *c.slope_floor;
        if (!c.note.empty()) cj["note"] = c.note;
        j.push_back(cj);
    }
    if (!out_dir.empty()) {
        write_text_file(fs::path(out_dir) / "checks.csv", csv);
        write_text_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
    }
    if (!all_pass) {
        for (const auto& c : checks)
            if (!c.pass)
                std::printf("failed: %s (metric %.6g vs threshold %.4g)\n", c.name.c_str(),
                            c.metric, c.threshold);
    }
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, int refine) {
    const RunRecord rec = run(cfg, refine);
    print_warnings(rec.config);
    std::printf("run: d=%d n=%d L=%.6g alpha=%.3g lambda=%+d seed=%llu dt=%.3g steps=%zu\n",
                cfg.dimension, cfg.n, cfg.L, cfg.alpha, cfg.lambda,
                static_cast<unsigned long long>(cfg.seed), rec.path.dt, rec.t.size() - 1);
    if (rec.boundary_max)
        std::printf("initial boundary max: %.3e (box half-length L=%.6g)\n", *rec.boundary_max,
                    cfg.L);
    double drift = 0.0;
    for (double m : rec.mass)
        drift = std::max(drift, rec.mass.front() > 0
                                    ? std::abs(m - rec.mass.front()) / rec.mass.front()
                                    : m);
    std::printf("final: mass=%.9g h1=%.6g h2=%.6g linf=%.6g  max-mass-drift=%.3e\n",
                rec.mass.back(), rec.h1.back(), rec.h2.back(), rec.linf.back(), drift);
    if (rec.has_equiv()) {
        double sup = 0.0;
        for (double e : rec.equiv_err) sup = std::max(sup, e);
        std::printf("formulation equivalence sup error: %.6e\n", sup);
    }
    if (rec.blowup_time)
        std::printf("blow-up suspected at t=%.6g (non-finite field; heuristic, dt=%.3g)\n",
                    *rec.blowup_time, rec.path.dt);
    if (!cfg.output_dir.empty()) {
        persist(rec, cfg.output_dir);
        std::printf("persisted to %s\n", cfg.output_dir.c_str());
    }
    return 0;
}

int cmd_verify(const std::string& dir, const std::string& out_dir) {
    RunRecord stored = load(dir);
    RunConfig cfg = stored.config;
    cfg.keep_fields = true;
    const RunRecord rerun = run(cfg, stored.path.level);

    std::vector<CheckResult> checks;

    // determinism: the stored series must reproduce byte for byte
    {
        std::ifstream in(fs::path(dir) / "series.csv", std::ios::binary);
        std::string stored_csv((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        const bool same = stored_csv == series_csv(rerun);
        checks.push_back({"determinism-replay", same ? 0.0 : 1.0, 0.5, same, {}, {},
                          "stored series.csv vs deterministic re-run"});
    }

    const NoiseModel model(cfg.grid(), cfg.noise);
    const bool direct = cfg.formulation != RunConfig::Formulation::rescaled;

    if (model.channels() > 0) {
        const DecayReport decay = check_h1s(model, 2, cfg.grid());
        double shell_max = 0.0;
        for (double v : decay.shell_max_by_order) shell_max = std::max(shell_max, v);
        checks.push_back({"profile-decay", shell_max, decay.threshold, decay.pass, {}, {},
                          "weighted profile derivatives on the outer shell, orders <= 4"});
    }

    if (direct) {
        const auto drift = mass_drift(*rerun.fields_direct);
        double worst = 0.0;
        for (double v : drift) worst = std::max(worst, v);
        const double steps = static_cast<double>(rerun.t.size());
        const double threshold = 1e-10 * std::max(1.0, steps / 1e3);
        checks.push_back({"mass-conservation", worst, threshold, worst <= threshold, {}, {},
                          "direct solver relative L2 drift"});
    }

    {
        // the integral identity concerns the stochastic variable X; a
        // rescaled-only record is gauge-transformed first
        const SpaceTimeField X =
            direct ? *rerun.fields_direct
                   : transform_gauge(*rerun.fields_rescaled, model, rerun.path, +1);
        const auto residual = weak_form_residual(X, model, rerun.path, cfg.alpha, cfg.lambda);
        double sup = 0.0;
        for (double r : residual) sup = std::max(sup, r);
        const bool zero_at_start = residual.front() == 0.0;
        checks.push_back({"weak-form-at-zero", residual.front(), 0.0, zero_at_start, {}, {},
                          "residual at t = 0 must vanish exactly"});
        checks.push_back({"weak-form-sup", sup, 1e-1, sup <= 1e-1, {}, {},
                          "left-sum residual magnitude (scale check only)"});
    }

    if (rerun.has_equiv()) {
        double sup = 0.0;
        for (double e : rerun.equiv_err) sup = std::max(sup, e);
        checks.push_back({"formulation-equivalence", sup, 1e-2, sup <= 1e-2, {}, {},
                          "sup_t |e^W y - X|_{L2} at the run's dt"});
    }

    {
        // the Lipschitz bound concerns the rescaled variable y; a direct-only
        // record is gauge-transformed first
        const SpaceTimeField y =
            rerun.fields_rescaled
                ? *rerun.fields_rescaled
                : transform_gauge(*rerun.fields_direct, model, rerun.path, -1);
        const LipschitzReport rep = lipschitz_check(y);
        const double bound = rep.derivative_sup * 1.05;
        checks.push_back({"lipschitz-quotient", rep.quotient_max, bound,
                          rep.quotient_max <= bound, {}, {},
                          "difference quotients vs measured time derivative"});
    }

    {
        const auto hit = blowup_monitor(rerun.h2, 1e3 * rerun.h2.front());
        checks.push_back({"blowup-monitor", hit ? rerun.t[static_cast<std::size_t>(*hit)] : 0.0,
                          0.0, !hit || rerun.blowup_time.has_value(), {}, {},
                          hit ? "H2 crossed 1000x its initial value (heuristic)"
                              : "no crossing at 1000x initial H2"});
    }

    // an explicit diagnostics list in the config selects a subset by name
    if (!cfg.diagnostics.empty()) {
        std::vector<CheckResult> selected;
        for (const auto& c : checks) {
            for (const auto& want : cfg.diagnostics)
                if (c.name.rfind(want, 0) == 0 || c.name == want) {
                    selected.push_back(c);
                    break;
                }
        }
        checks = std::move(selected);
    }

    const int status = report_checks(checks, out_dir.empty() ? dir : out_dir);
    std::printf("verify: %s\n", status == 0 ? "all checks passed" : "CHECKS FAILED");
    return status;
}

int cmd_equivalence(RunConfig cfg, int refine_levels, const std::string& out_dir) {
    cfg.formulation = RunConfig::Formulation::both;
    print_warnings(cfg);
    std::vector<double> dts, errs;
    std::vector<RefinementRow> rows;
    const int levels = std::max(3, refine_levels + 1);
    for (int level = 0; level < levels; ++level) {
        const RunRecord rec = run(cfg, level);
        double sup = 0.0;
        for (double e : rec.equiv_err) sup = std::max(sup, e);
        const double rel = rec.mass.front() > 0 ? sup / rec.mass.front() : sup;
        dts.push_back(rec.path.dt);
        errs.push_back(rel);
        rows.push_back({level, rec.path.dt, "equivalence_rel_sup", rel});
        std::printf("level %d dt=%.6g sup|e^W y - X|/|x| = %.6e\n", level, rec.path.dt, rel);
    }
    const double slope = fit_loglog_slope(dts, errs);
    std::printf("least-squares slope: %.3f (floor 1.0), finest error: %.3e\n", slope,
                errs.back());
    if (!out_dir.empty()) {
        std::string csv = "level,dt,metric,value\n";
        for (const auto& r : rows)
            csv += std::to_string(r.level) + "," + format_double(r.dt) + "," + r.metric + "," +
                   format_double(r.value) + "\n";
        write_text_file(fs::path(out_dir) / "refinement.csv", csv);
    }
    if (slope < 1.0) {
        std::printf("failed: equivalence slope %.3f below floor 1.0\n", slope);
        return 1;
    }
    return 0;
}

int cmd_picard(RunConfig cfg, int samples, int pairs, int iterations,
               const std::string& out_dir) {
    print_warnings(cfg);
    const Grid grid = cfg.grid();
    const NoiseModel model(grid, cfg.noise);
    const BrownianPath path = sample_path(model.channels(), cfg.T, cfg.dt, cfg.seed);
    const ComplexField x = build_initial(cfg.initial, grid);
    const double x_h2 = sobolev_norm(x, 2.0);

    const Rational alpha_r = Rational::from_double(cfg.alpha);
    const StrichartzPair pair = proof_pair(cfg.dimension, alpha_r, PairContext::step1);
    const double theta = theta_gap(pair.q).to_double();
    std::printf("pair (p,q) = %s, theta = %s = %.6g\n", pair.to_string().c_str(),
                theta_gap(pair.q).to_string().c_str(), theta);

    const EmpiricalConstant chat = estimate_strichartz_constant(
        &model, path, path.steps(), pair, pair, samples, cfg.seed + 1);
    const TrajectoryBall ball =
        ball_and_stopping_time(x_h2, cfg.alpha, chat, path.dt, theta, pair);
    std::printf("C_hat(T) = %.6g, |x|_{H2} = %.6g, tau1 = %.6g (index %d), M1 = %.6g\n",
                chat.value(), x_h2, ball.tau, ball.tau_index, ball.radius);

    const ContractionReport contraction =
        measure_contraction(x, ball, &model, path, cfg.alpha, cfg.lambda, pairs, cfg.seed + 2);
    std::printf("kappa_hat = %.4f over %d trajectory pairs\n", contraction.kappa_hat, pairs);

    const PicardRun pic = picard_iterate(x, ball, &model, path, cfg.alpha, cfg.lambda, iterations);
    std::printf("picard increments:");
    for (double inc : pic.increments) std::printf(" %.3e", inc);
    std::printf("\n");

    // compare the converged iterate against the rescaled solver
    RescaledStepper stepper;
    stepper.model = &model;
    stepper.path = &path;
    stepper.alpha = cfg.alpha;
    stepper.lambda = cfg.lambda;
    ComplexField y = x;
    double solver_gap = 0.0;
    for (int m = 0; m <= ball.tau_index; ++m) {
        ComplexField diff = pic.iterate.field_at(m);
        diff -= y;
        solver_gap = std::max(solver_gap, lebesgue_norm(diff, 2.0));
        if (m < ball.tau_index) stepper.step(y, m, path.dt);
    }
    std::printf("fixed point vs solver (L^inf L^2): %.3e\n", solver_gap);

    nlohmann::json j;
    j["C_hat"] = chat.value();
    j["tau1"] = ball.tau;
    j["M1"] = ball.radius;
    j["kappa_hat"] = contraction.kappa_hat;
    j["theta"] = theta;
    j["pair"] = pair.to_string();
    j["per_sample"] = chat.per_sample;
    j["per_pair"] = contraction.per_pair;
    j["picard_increments"] = pic.increments;
    j["picard_ratios"] = pic.ratios;
    j["solver_gap"] = solver_gap;
    const std::string text = j.dump(2) + "\n";
    if (!out_dir.empty())
        write_text_file(fs::path(out_dir) / "picard.json", text);
    else
        std::cout << text;

    if (contraction.kappa_hat > 0.6) {
        std::printf("failed: kappa_hat %.4f above 0.6\n", contraction.kappa_hat);
        return 1;
    }
    return 0;
}

int cmd_pairs(const std::string& format) {
    const bool csv = format == "csv";
    const bool as_json = format == "json";
    nlohmann::json rows = nlohmann::json::array();
    if (csv)
        std::printf("context,d,alpha,p,q,theta,admissible\n");
    else if (!as_json)
        std::printf("%-10s %-3s %-7s %-10s %-10s %-8s %s\n", "context", "d", "alpha", "p", "q",
                    "theta", "admissible");
    const auto emit = [&](PairContext ctx, int d, const Rational& a) {
        const StrichartzPair pr = proof_pair(d, a, ctx);
        const bool ok = is_admissible(d, pr.p, pr.q);
        const std::string theta = pr.q > Rational(2) ? theta_gap(pr.q).to_string() : "-";
        if (as_json) {
            rows.push_back({{"context", to_string(ctx)},
                            {"d", d},
                            {"alpha", a.to_string()},
                            {"p", pr.p.to_string()},
                            {"q", pr.q.to_string()},
                            {"theta", theta},
                            {"admissible", ok}});
        } else if (csv)
            std::printf("%s,%d,%s,%s,%s,%s,%d\n", to_string(ctx).c_str(), d,
                        a.to_string().c_str(), pr.p.to_string().c_str(),
                        pr.q.to_string().c_str(), theta.c_str(), ok ? 1 : 0);
        else
            std::printf("%-10s %-3d %-7s %-10s %-10s %-8s %s\n", to_string(ctx).c_str(), d,
                        a.to_string().c_str(), pr.p.to_string().c_str(),
                        pr.q.to_string().c_str(), theta.c_str(), ok ? "yes" : "NO");
    };
    const std::vector<Rational> alphas{Rational(2), Rational(5, 2), Rational(3), Rational(7, 2)};
    for (int d = 1; d <= 4; ++d)
        for (const auto& a : alphas)
            if (proof_pair_domain(d, PairContext::step1).contains(a))
                emit(PairContext::step1, d, a);
    for (const auto& a : alphas)
        if (proof_pair_domain(4, PairContext::ycor_d4).contains(a))
            emit(PairContext::ycor_d4, 4, a);
    for (int d = 5; d <= 7; ++d)
        for (const auto& a : alphas)
            if (proof_pair_domain(d, PairContext::ycor_d567).contains(a))
                emit(PairContext::ycor_d567, d, a);
    for (int d = 1; d <= 7; ++d)
        for (const auto& a : alphas)
            if (proof_pair_domain(d, PairContext::yglob).contains(a))
                emit(PairContext::yglob, d, a);
    if (as_json) std::printf("%s\n", rows.dump(2).c_str());
    return 0;
}

int cmd_check_powers(const std::string& alpha_text, int d, const std::string& scope_text,
                     int lambda, const std::string& format) {
    if (!alpha_text.empty()) {
        const Rational alpha = Rational::parse(alpha_text);
        const auto scope = scope_from_string(scope_text);
        if (!scope) throw std::runtime_error("unknown scope " + scope_text);
        const AlphaRange range = power_range(d, scope_sobolev_index(*scope), lambda, *scope);
        const bool in = range.contains(alpha);
        std::printf("alpha = %s, d = %d, scope %s (lambda %+d): range %s -> %s\n",
                    alpha.to_string().c_str(), d, scope_text.c_str(), lambda,
                    range.to_string().c_str(), in ? "inside" : "outside");
        return 0;
    }
    const bool csv = format == "csv";
    const bool as_json = format == "json";
    nlohmann::json rows = nlohmann::json::array();
    if (csv)
        std::printf("scope,lambda,d,range\n");
    else if (!as_json)
        std::printf("%-22s %-3s %s\n", "scope(lambda)", "d", "alpha range");
    const auto emit = [&](const std::string& name, int lam, int dim, const AlphaRange& r) {
        if (as_json)
            rows.push_back(
                {{"scope", name}, {"lambda", lam}, {"d", dim}, {"range", r.to_string()}});
        else if (csv)
            std::printf("%s,%d,%d,%s\n", name.c_str(), lam, dim, r.to_string().c_str());
        else
            std::printf("%-22s %-3d %s\n",
                        (name + (lam ? (lam > 0 ? "(+1)" : "(-1)") : "")).c_str(), dim,
                        r.to_string().c_str());
    };
    for (int dim = 1; dim <= 10; ++dim) {
        for (const Rational& s : {Rational(0), Rational(1), Rational(2)})
            emit("scaling-H" + s.to_string(), 0, dim, scaling_range(dim, s));
        emit("local-L2", 0, dim, power_range(dim, 0, -1, RangeScope::local_l2));
        emit("local-H1", 0, dim, power_range(dim, 1, -1, RangeScope::local_h1));
        emit("local-H2", 0, dim, power_range(dim, 2, -1, RangeScope::local_h2));
        if (dim <= 7) emit("H2-smooth", 0, dim, power_range(dim, 2, -1, RangeScope::h2_smooth));
        for (int lam : {-1, 1}) {
            emit("global-H1", lam, dim, power_range(dim, 1, lam, RangeScope::global_h1));
            if (dim <= 7)
                emit("global-H2", lam, dim, power_range(dim, 2, lam, RangeScope::global_h2));
        }
    }
    if (as_json) std::printf("%s\n", rows.dump(2).c_str());
    return 0;
}

int cmd_norms(const std::string& dir, int windows, const std::string& out_path) {
    RunRecord stored = load(dir);
    RunConfig cfg = stored.config;
    cfg.keep_fields = true;
    const RunRecord rerun = run(cfg, stored.path.level);
    const auto& traj = rerun.fields_rescaled ? *rerun.fields_rescaled : *rerun.fields_direct;

    const DyadicBand band = resolvable_band(traj.grid);
    std::string csv = "series,t,value\n";
    for (int w = 1; w <= windows; ++w) {
        const double tw = cfg.T * w / windows;
        csv += "xtilde," + format_double(tw) + "," + format_double(xtilde_norm(traj, tw)) + "\n";
        for (int k = band.k_min; k <= band.k_max; ++k) {
            const SpaceTimeField uk = littlewood_paley_project(traj, k);
            csv += "xk[" + std::to_string(k) + "]," + format_double(tw) + "," +
                   format_double(xk_norm(uk, k, tw)) + "\n";
        }
    }
    if (out_path.empty())
        std::cout << csv;
    else
        write_text_file(out_path, csv);
    return 0;
}

int cmd_convergence(RunConfig cfg, int refine_levels, const std::string& out_dir) {
    cfg.formulation = RunConfig::Formulation::both;
    cfg.keep_fields = true;
    print_warnings(cfg);
    const int levels = std::max(3, refine_levels + 1);
    std::vector<double> dts, equiv, weak;
    std::vector<RefinementRow> rows;
    for (int level = 0; level < levels; ++level) {
        const RunRecord rec = run(cfg, level);
        const NoiseModel model(cfg.grid(), cfg.noise);
        double esup = 0.0;
        for (double e : rec.equiv_err) esup = std::max(esup, e);
        const auto residual =
            weak_form_residual(*rec.fields_direct, model, rec.path, cfg.alpha, cfg.lambda);
        double wsup = 0.0;
        for (double r : residual) wsup = std::max(wsup, r);
        dts.push_back(rec.path.dt);
        equiv.push_back(esup / std::max(rec.mass.front(), 1e-300));
        weak.push_back(wsup);
        rows.push_back({level, rec.path.dt, "equivalence_rel_sup", equiv.back()});
        rows.push_back({level, rec.path.dt, "weak_form_sup", wsup});
        std::printf("level %d dt=%.6g equivalence=%.4e weak-form=%.4e\n", level, rec.path.dt,
                    equiv.back(), wsup);
    }
    const double eslope = fit_loglog_slope(dts, equiv);
    const double wslope = fit_loglog_slope(dts, weak);
    std::printf("slopes: equivalence %.3f (floor 1.0), weak-form %.3f (informational)\n", eslope,
                wslope);
    if (!out_dir.empty()) {
        std::string csv = "level,dt,metric,value\n";
        for (const auto& r : rows)
            csv += std::to_string(r.level) + "," + format_double(r.dt) + "," + r.metric + "," +
                   format_double(r.value) + "\n";
        write_text_file(fs::path(out_dir) / "refinement.csv", csv);
    }
    if (eslope < 1.0) {
        std::printf("failed: equivalence slope %.3f below floor 1.0\n", eslope);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snls: stochastic nonlinear Schrodinger simulation laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir, format = "text", alpha_text,
                scope_text = "local-H2";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int refine = 0, samples = 32, pairs = 8, iterations = 8, windows = 4, d = 1, lambda = -1;

    const auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config) sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--seed", seed, "override the configured seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--refine", refine, "halve dt this many times");
        sub->add_option("--format", format, "csv, text or json")
            ->check(CLI::IsMember({"csv", "text", "json"}));
    };

    auto* simulate = app.add_subcommand("simulate", "run the configured solvers over [0, T]");
    add_common(simulate, true);
    auto* verify = app.add_subcommand("verify", "re-run a saved run and verify its diagnostics");
    verify->add_option("--dir", run_dir, "saved run directory")->required();
    verify->add_option("--out", out_dir, "report output directory");
    auto* equivalence =
        app.add_subcommand("equivalence", "dual-formulation agreement under dt refinement");
    add_common(equivalence, true);
    auto* picard = app.add_subcommand("picard", "fixed-point machinery at desk scale");
    add_common(picard, true);
    picard->add_option("--samples", samples, "estimate samples for the space-time constant");
    picard->add_option("--pairs", pairs, "trajectory pairs for the contraction factor");
    picard->add_option("--iterations", iterations, "Picard iterations");
    double alpha_override = 0.0;
    int d_override = 0;
    picard->add_option("--alpha", alpha_override, "override the configured nonlinearity power");
    picard->add_option("--d", d_override, "override the configured dimension");
    auto* pairs_cmd = app.add_subcommand("pairs", "exact admissible-pair tables");
    pairs_cmd->add_option("--format", format, "csv, text or json")
        ->check(CLI::IsMember({"csv", "text", "json"}));
    auto* powers = app.add_subcommand("check-powers", "exact nonlinearity-power ranges");
    powers->add_option("--alpha", alpha_text, "rational alpha for a membership query, e.g. 7/3");
    powers->add_option("--d", d, "dimension for the membership query");
    powers->add_option("--scope", scope_text,
                       "local-L2 | local-H1 | local-H2 | H2-smooth | global-H1 | global-H2");
    powers->add_option("--lambda", lambda, "+1 focusing, -1 defocusing");
    powers->add_option("--format", format, "csv, text or json")
        ->check(CLI::IsMember({"csv", "text", "json"}));
    auto* norms = app.add_subcommand("norms", "local-smoothing norm tables from a saved run");
    norms->add_option("--dir", run_dir, "saved run directory")->required();
    norms->add_option("--windows", windows, "number of prefix time windows");
    norms->add_option("--out", out_dir, "output CSV path");
    auto* convergence =
        app.add_subcommand("convergence", "refinement study: equivalence and weak-form residual");
    add_common(convergence, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(simulate))
            return cmd_simulate(load_config(config_path, seed_set ? &seed : nullptr, out_dir),
                                refine);
        if (app.got_subcommand(verify)) return cmd_verify(run_dir, out_dir);
        if (app.got_subcommand(equivalence))
            return cmd_equivalence(load_config(config_path, seed_set ? &seed : nullptr, ""),
                                   std::max(refine, 2), out_dir);
        if (app.got_subcommand(picard)) {
            RunConfig cfg = load_config(config_path, seed_set ? &seed : nullptr, "");
            if (alpha_override > 0.0) cfg.alpha = alpha_override;
            if (d_override > 0) {
                cfg.dimension = d_override;
                if (config_path.empty()) cfg.n = d_override == 1 ? 512 : (d_override == 2 ? 64 : 32);
            }
            if (refine > 0) {
                cfg.dt /= std::pow(2.0, refine);  // finer fixed-point grid
            }
            return cmd_picard(cfg, samples, pairs, iterations, out_dir);
        }
        if (app.got_subcommand(pairs_cmd)) return cmd_pairs(format);
        if (app.got_subcommand(powers))
            return cmd_check_powers(alpha_text, d, scope_text, lambda, format);
        if (app.got_subcommand(norms)) return cmd_norms(run_dir, windows, out_dir);
        if (app.got_subcommand(convergence))
            return cmd_convergence(load_config(config_path, seed_set ? &seed : nullptr, ""),
                                   std::max(refine, 2), out_dir);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
