#pragma once

// Run configuration: JSON in, validated struct out. Validation collects every
// violation before failing; exponent-range mismatches are warnings, not
// errors, so labeled exploration outside the proven ranges stays possible.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "snls/exponents.hpp"
#include "snls/grid.hpp"
#include "snls/noise.hpp"

namespace snls {

struct InitialSpec {
    enum class Kind { gaussian, plane_wave };
    Kind kind = Kind::gaussian;
    // gaussian
    double amplitude = 1.0;
    double width = 2.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    // plane wave: integer mode per axis
    std::array<int, 3> mode{1, 0, 0};
};

struct RunConfig {
    int dimension = 1;
    int n = 512;
    double L = 62.83185307179586477;  // 20*pi
    double alpha = 3.0;
    int lambda = -1;
    std::vector<ProfileSpec> noise;
    std::uint64_t seed = 1;
    double T = 1.0;
    double dt = 1e-3;
    enum class Formulation { direct, rescaled, both };
    Formulation formulation = Formulation::both;
    InitialSpec initial;
    std::string output_dir;
    std::vector<std::string> diagnostics;
    int snapshot_stride = 0;  // 0 = no field snapshots
    bool keep_fields = false; // retain the full in-memory trajectory

    std::vector<std::string> warnings;

    Grid grid() const { return Grid(dimension, n, L); }
    int steps() const { return static_cast<int>(std::llround(T / dt)); }
};

struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& e : v) s += "\n  - " + e;
        return s;
    }
};

inline std::string to_string(RunConfig::Formulation f) {
    switch (f) {
        case RunConfig::Formulation::direct: return "direct";
        case RunConfig::Formulation::rescaled: return "rescaled";
        case RunConfig::Formulation::both: return "both";
    }
    return "?";
}

inline ComplexField build_initial(const InitialSpec& spec, const Grid& grid) {
    ComplexField x(grid);
    std::array<double, 3> xi{};
    if (spec.kind == InitialSpec::Kind::gaussian) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, xi);
            double r2 = 0.0;
            for (int d = 0; d < grid.dimension; ++d) {
                const double u = xi[static_cast<std::size_t>(d)] -
                                 spec.center[static_cast<std::size_t>(d)];
                r2 += u * u;
            }
            x[i] = spec.amplitude * std::exp(-r2 / (spec.width * spec.width));
        }
    } else {
        const double pi_over_L = 3.14159265358979323846 / grid.box_half_length;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, xi);
            double phase = 0.0;
            for (int d = 0; d < grid.dimension; ++d)
                phase += spec.mode[static_cast<std::size_t>(d)] * pi_over_L *
                         xi[static_cast<std::size_t>(d)];
            x[i] = cplx(std::cos(phase), std::sin(phase));
        }
    }
    return x;
}

// Boundary-decay certificate for the periodic-box surrogate: the largest |x|
// on the outermost lattice shell. Plane waves are periodic-native and skip it.
inline std::optional<double> boundary_decay(const InitialSpec& spec, const ComplexField& x) {
    if (spec.kind == InitialSpec::Kind::plane_wave) return std::nullopt;
    const Grid& g = x.grid;
    double worst = 0.0;
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, idx);
        bool on_shell = false;
        for (int d = 0; d < g.dimension; ++d)
            if (idx[static_cast<std::size_t>(d)] == 0 ||
                idx[static_cast<std::size_t>(d)] == g.points_per_axis - 1)
                on_shell = true;
        if (on_shell) worst = std::max(worst, std::abs(x[i]));
    }
    return worst;
}

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    std::vector<std::string> errors;

    const auto number = [&](const nlohmann::json& node, const char* name, double& out) {
        if (!node.is_number()) {
            errors.push_back(std::string(name) + ": expected a number");
            return false;
        }
        out = node.get<double>();
        return true;
    };

    if (j.contains("dimension")) {
        if (!j["dimension"].is_number_integer())
            errors.push_back("dimension: expected an integer");
        else
            cfg.dimension = j["dimension"].get<int>();
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("n")) {
            if (!g["n"].is_number_integer())
                errors.push_back("grid.n: expected an integer");
            else
                cfg.n = g["n"].get<int>();
        }
        if (g.contains("L")) number(g["L"], "grid.L", cfg.L);
    } else if (cfg.dimension == 2) {
        cfg.n = 128;
    } else if (cfg.dimension == 3) {
        cfg.n = 32;
    }
    if (j.contains("alpha")) number(j["alpha"], "alpha", cfg.alpha);
    if (j.contains("lambda")) {
        if (!j["lambda"].is_number_integer())
            errors.push_back("lambda: expected +1 or -1");
        else
            cfg.lambda = j["lambda"].get<int>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            errors.push_back("seed: expected an unsigned integer");
        else
            cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("time")) {
        const auto& t = j["time"];
        if (t.contains("T")) number(t["T"], "time.T", cfg.T);
        if (t.contains("dt")) number(t["dt"], "time.dt", cfg.dt);
    }
    if (j.contains("formulation")) {
        const std::string f = j["formulation"].get<std::string>();
        if (f == "direct") cfg.formulation = RunConfig::Formulation::direct;
        else if (f == "rescaled") cfg.formulation = RunConfig::Formulation::rescaled;
        else if (f == "both") cfg.formulation = RunConfig::Formulation::both;
        else errors.push_back("formulation: expected direct | rescaled | both");
    }
    if (j.contains("noise")) {
        if (!j["noise"].is_array()) {
            errors.push_back("noise: expected an array of profiles");
        } else {
            for (const auto& p : j["noise"]) {
                ProfileSpec spec;
                if (p.contains("kind") && p["kind"].get<std::string>() != "gaussian") {
                    errors.push_back("noise.kind: only 'gaussian' profiles are built in");
                    continue;
                }
                if (p.contains("amplitude")) number(p["amplitude"], "noise.amplitude", spec.amplitude);
                if (p.contains("width")) number(p["width"], "noise.width", spec.width);
                if (p.contains("center")) {
                    const auto& c = p["center"];
                    if (!c.is_array())
                        errors.push_back("noise.center: expected an array");
                    else
                        for (std::size_t d = 0; d < std::min<std::size_t>(3, c.size()); ++d)
                            spec.center[d] = c[d].get<double>();
                }
                if (!(spec.width > 0.0)) errors.push_back("noise.width: must be positive");
                cfg.noise.push_back(spec);
            }
        }
    }
    if (j.contains("initial")) {
        const auto& init = j["initial"];
        const std::string kind = init.value("kind", std::string("gaussian"));
        if (kind == "gaussian") {
            cfg.initial.kind = InitialSpec::Kind::gaussian;
            if (init.contains("amplitude"))
                number(init["amplitude"], "initial.amplitude", cfg.initial.amplitude);
            if (init.contains("width")) number(init["width"], "initial.width", cfg.initial.width);
            if (init.contains("center")) {
                const auto& c = init["center"];
                for (std::size_t d = 0; d < std::min<std::size_t>(3, c.size()); ++d)
                    cfg.initial.center[d] = c[d].get<double>();
            }
            if (!(cfg.initial.width > 0.0)) errors.push_back("initial.width: must be positive");
        } else if (kind == "plane-wave") {
            cfg.initial.kind = InitialSpec::Kind::plane_wave;
            if (init.contains("mode")) {
                const auto& m = init["mode"];
                if (m.is_array())
                    for (std::size_t d = 0; d < std::min<std::size_t>(3, m.size()); ++d)
                        cfg.initial.mode[d] = m[d].get<int>();
                else
                    cfg.initial.mode[0] = m.get<int>();
            }
        } else {
            errors.push_back("initial.kind: expected gaussian | plane-wave");
        }
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("diagnostics")) {
        for (const auto& d : j["diagnostics"]) cfg.diagnostics.push_back(d.get<std::string>());
    }
    if (j.contains("snapshot_stride")) cfg.snapshot_stride = j["snapshot_stride"].get<int>();
    if (j.contains("keep_fields")) cfg.keep_fields = j["keep_fields"].get<bool>();

    // hard validation
    if (cfg.dimension < 1 || cfg.dimension > 3)
        errors.push_back("dimension: grids support d in {1,2,3}");
    if (cfg.n < 16 || (cfg.n & (cfg.n - 1)) != 0)
        errors.push_back("grid.n: must be a power of two >= 16");
    if (!(cfg.L > 0.0)) errors.push_back("grid.L: must be positive");
    if (!(cfg.alpha > 1.0)) errors.push_back("alpha: must satisfy alpha > 1");
    if (cfg.lambda != 1 && cfg.lambda != -1) errors.push_back("lambda: must be +1 or -1");
    if (!(cfg.dt > 0.0)) errors.push_back("time.dt: must be positive");
    if (!(cfg.T >= 0.0)) errors.push_back("time.T: must be nonnegative");
    if (cfg.dt > 0.0 && cfg.T >= 0.0) {
        const double ratio = cfg.T / cfg.dt;
        if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio))
            errors.push_back("time: dt must divide T");
    }
    if (cfg.snapshot_stride < 0) errors.push_back("snapshot_stride: must be >= 0");
    if (!errors.empty()) throw ConfigError(std::move(errors));

    // soft exponent-range warnings; exploration outside the proven ranges is
    // permitted but labeled
    if (cfg.dimension >= 1 && cfg.alpha > 1.0) {
        const Rational approx = Rational::from_double(cfg.alpha);
        const AlphaRange local = power_range(cfg.dimension, 2, cfg.lambda, RangeScope::local_h2);
        if (!local.contains(approx))
            cfg.warnings.push_back("alpha = " + approx.to_string() +
                                   " lies outside the local-H2 range " + local.to_string() +
                                   " for d = " + std::to_string(cfg.dimension) +
                                   "; the run is exploratory");
        const AlphaRange global =
            power_range(cfg.dimension, 2, cfg.lambda, RangeScope::global_h2);
        if (!global.contains(approx))
            cfg.warnings.push_back("alpha = " + approx.to_string() +
                                   " lies outside the global-H2 range " + global.to_string() +
                                   " for d = " + std::to_string(cfg.dimension) + ", lambda = " +
                                   std::to_string(cfg.lambda) +
                                   "; the trajectory may leave H2 in finite time");
    }
    return cfg;
}

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }
    return parse_config(j);
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["dimension"] = cfg.dimension;
    j["grid"] = {{"n", cfg.n}, {"L", cfg.L}};
    j["alpha"] = cfg.alpha;
    j["lambda"] = cfg.lambda;
    j["seed"] = cfg.seed;
    j["time"] = {{"T", cfg.T}, {"dt", cfg.dt}};
    j["formulation"] = to_string(cfg.formulation);
    j["noise"] = nlohmann::json::array();
    for (const auto& p : cfg.noise) {
        nlohmann::json pj;
        pj["kind"] = "gaussian";
        pj["amplitude"] = p.amplitude;
        pj["width"] = p.width;
        pj["center"] = std::vector<double>(p.center.begin(),
                                           p.center.begin() + cfg.dimension);
        j["noise"].push_back(pj);
    }
    nlohmann::json init;
    if (cfg.initial.kind == InitialSpec::Kind::gaussian) {
        init["kind"] = "gaussian";
        init["amplitude"] = cfg.initial.amplitude;
        init["width"] = cfg.initial.width;
        init["center"] = std::vector<double>(cfg.initial.center.begin(),
                                             cfg.initial.center.begin() + cfg.dimension);
    } else {
        init["kind"] = "plane-wave";
        init["mode"] = std::vector<int>(cfg.initial.mode.begin(),
                                        cfg.initial.mode.begin() + cfg.dimension);
    }
    j["initial"] = init;
    j["output_dir"] = cfg.output_dir;
    j["diagnostics"] = cfg.diagnostics;
    j["snapshot_stride"] = cfg.snapshot_stride;
    return j;
}

}  // namespace snls
