#pragma once

// Persisted experiment results. Layout of a run directory:
//   config.json              exact configuration echo
//   series.csv               columns: t,mass,h1,h2,linf[,equiv_err]
//                            (mass holds the L^2 norm of the state)
//   path.csv                 Brownian increments: channel,step,dbeta
//   metadata.json            {version, wall_time_s, seed}
//   refinement.csv           optional: level,dt,metric,value
//   snapshots/snap_%06d.json+.bin
//                            raw little-endian complex64 (float32 re/im
//                            pairs) with a JSON header {d, n, L, t}
//
// CSV numbers are printed with %.17g so identical runs are byte-identical.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snls/config.hpp"
#include "snls/noise.hpp"
#include "snls/spacetime.hpp"

namespace snls {

inline constexpr const char* kRecordVersion = "1.0";

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RefinementRow {
    int level = 0;
    double dt = 0.0;
    std::string metric;
    double value = 0.0;
};

struct Snapshot {
    int slice = 0;
    double t = 0.0;
    ComplexField field;
};

struct RunRecord {
    RunConfig config;
    std::vector<double> t;
    std::vector<double> mass;  // L^2 norm per slice
    std::vector<double> h1;
    std::vector<double> h2;
    std::vector<double> linf;
    std::vector<double> equiv_err;  // present iff formulation == both
    std::vector<Snapshot> snapshots;
    BrownianPath path;
    std::vector<RefinementRow> refinement;

    std::optional<double> boundary_max;    // decay certificate of the initial data
    std::optional<double> blowup_time;     // first non-finite field, if any
    double wall_time_s = 0.0;
    std::string version = kRecordVersion;

    // full trajectories, retained in memory only (never persisted wholesale)
    std::optional<SpaceTimeField> fields_direct;
    std::optional<SpaceTimeField> fields_rescaled;

    bool has_equiv() const { return !equiv_err.empty(); }
};

inline std::string series_csv(const RunRecord& r) {
    std::string out = r.has_equiv() ? "t,mass,h1,h2,linf,equiv_err\n" : "t,mass,h1,h2,linf\n";
    for (std::size_t m = 0; m < r.t.size(); ++m) {
        out += format_double(r.t[m]);
        out += ',';
        out += format_double(r.mass[m]);
        out += ',';
        out += format_double(r.h1[m]);
        out += ',';
        out += format_double(r.h2[m]);
        out += ',';
        out += format_double(r.linf[m]);
        if (r.has_equiv()) {
            out += ',';
            out += format_double(r.equiv_err[m]);
        }
        out += '\n';
    }
    return out;
}

inline std::string path_csv(const BrownianPath& p) {
    std::string out = "channel,step,dbeta\n";
    for (std::size_t c = 0; c < p.increments.size(); ++c)
        for (std::size_t m = 0; m < p.increments[c].size(); ++m) {
            out += std::to_string(c);
            out += ',';
            out += std::to_string(m);
            out += ',';
            out += format_double(p.increments[c][m]);
            out += '\n';
        }
    return out;
}

namespace detail {

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("persist: cannot open " + p.string());
    f << text;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("load: cannot open " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

inline void persist(const RunRecord& record, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    detail::write_text(fs::path(dir) / "config.json", config_to_json(record.config).dump(2) + "\n");
    detail::write_text(fs::path(dir) / "series.csv", series_csv(record));
    detail::write_text(fs::path(dir) / "path.csv", path_csv(record.path));

    nlohmann::json meta;
    meta["version"] = record.version;
    meta["wall_time_s"] = record.wall_time_s;
    meta["seed"] = record.config.seed;
    meta["refine_level"] = record.path.level;
    if (record.boundary_max) meta["initial_boundary_max"] = *record.boundary_max;
    if (record.blowup_time) meta["blowup_suspected_at"] = *record.blowup_time;
    detail::write_text(fs::path(dir) / "metadata.json", meta.dump(2) + "\n");

    if (!record.refinement.empty()) {
        std::string csv = "level,dt,metric,value\n";
        for (const auto& row : record.refinement)
            csv += std::to_string(row.level) + "," + format_double(row.dt) + "," + row.metric +
                   "," + format_double(row.value) + "\n";
        detail::write_text(fs::path(dir) / "refinement.csv", csv);
    }

    if (!record.snapshots.empty()) {
        fs::create_directories(fs::path(dir) / "snapshots");
        for (const auto& snap : record.snapshots) {
            char name[32];
            std::snprintf(name, sizeof(name), "snap_%06d", snap.slice);
            nlohmann::json hdr;
            hdr["d"] = snap.field.grid.dimension;
            hdr["n"] = snap.field.grid.points_per_axis;
            hdr["L"] = snap.field.grid.box_half_length;
            hdr["t"] = snap.t;
            detail::write_text(fs::path(dir) / "snapshots" / (std::string(name) + ".json"),
                               hdr.dump(2) + "\n");
            std::ofstream bin(fs::path(dir) / "snapshots" / (std::string(name) + ".bin"),
                              std::ios::binary);
            for (const cplx& v : snap.field.values) {
                const float re = static_cast<float>(v.real());
                const float im = static_cast<float>(v.imag());
                bin.write(reinterpret_cast<const char*>(&re), sizeof(float));
                bin.write(reinterpret_cast<const char*>(&im), sizeof(float));
            }
        }
    }
}

inline RunRecord load(const std::string& dir) {
    namespace fs = std::filesystem;
    RunRecord record;
    record.config = parse_config(detail::read_text(fs::path(dir) / "config.json"));

    const nlohmann::json meta = nlohmann::json::parse(detail::read_text(fs::path(dir) / "metadata.json"));
    record.version = meta.value("version", std::string());
    if (record.version != kRecordVersion)
        throw std::runtime_error("load: version mismatch: found '" + record.version +
                                 "', expected '" + kRecordVersion + "'");
    record.wall_time_s = meta.value("wall_time_s", 0.0);
    record.path.level = meta.value("refine_level", 0);
    if (meta.contains("blowup_suspected_at"))
        record.blowup_time = meta["blowup_suspected_at"].get<double>();
    if (meta.contains("initial_boundary_max"))
        record.boundary_max = meta["initial_boundary_max"].get<double>();

    // series.csv with exact column validation
    {
        std::istringstream in(detail::read_text(fs::path(dir) / "series.csv"));
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("load: series.csv is empty");
        const auto cols = detail::split(line, ',');
        const std::vector<std::string> required{"t", "mass", "h1", "h2", "linf"};
        for (std::size_t i = 0; i < required.size(); ++i)
            if (i >= cols.size() || cols[i] != required[i])
                throw std::runtime_error("load: series.csv missing column '" + required[i] + "'");
        const bool has_equiv = cols.size() > 5 && cols[5] == "equiv_err";
        if (cols.size() > (has_equiv ? 6u : 5u))
            throw std::runtime_error("load: series.csv has unexpected columns");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto parts = detail::split(line, ',');
            if (parts.size() != cols.size())
                throw std::runtime_error("load: series.csv row with wrong arity");
            record.t.push_back(std::stod(parts[0]));
            record.mass.push_back(std::stod(parts[1]));
            record.h1.push_back(std::stod(parts[2]));
            record.h2.push_back(std::stod(parts[3]));
            record.linf.push_back(std::stod(parts[4]));
            if (has_equiv) record.equiv_err.push_back(std::stod(parts[5]));
        }
    }

    // path.csv
    {
        std::istringstream in(detail::read_text(fs::path(dir) / "path.csv"));
        std::string line;
        if (!std::getline(in, line) || line != "channel,step,dbeta")
            throw std::runtime_error("load: path.csv missing column 'dbeta'");
        std::vector<std::vector<double>> inc;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto parts = detail::split(line, ',');
            if (parts.size() != 3) throw std::runtime_error("load: path.csv row with wrong arity");
            const auto c = static_cast<std::size_t>(std::stoul(parts[0]));
            if (inc.size() <= c) inc.resize(c + 1);
            inc[c].push_back(std::stod(parts[2]));
        }
        record.path.channels = static_cast<int>(inc.size());
        record.path.increments = std::move(inc);
        record.path.seed = record.config.seed;
        record.path.horizon = record.config.T;
        record.path.step_count =
            !record.path.increments.empty()
                ? static_cast<int>(record.path.increments[0].size())
                : static_cast<int>(record.t.empty() ? 0 : record.t.size() - 1);
        record.path.dt = record.path.step_count > 0
                             ? record.config.T / record.path.step_count
                             : record.config.dt;
        record.path.rebuild_values();
    }

    // refinement.csv (optional)
    if (fs::exists(fs::path(dir) / "refinement.csv")) {
        std::istringstream in(detail::read_text(fs::path(dir) / "refinement.csv"));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto parts = detail::split(line, ',');
            if (parts.size() != 4) throw std::runtime_error("load: refinement.csv row arity");
            record.refinement.push_back(
                {std::stoi(parts[0]), std::stod(parts[1]), parts[2], std::stod(parts[3])});
        }
    }

    // snapshots
    const fs::path snapdir = fs::path(dir) / "snapshots";
    if (fs::exists(snapdir)) {
        std::vector<fs::path> headers;
        for (const auto& entry : fs::directory_iterator(snapdir))
            if (entry.path().extension() == ".json") headers.push_back(entry.path());
        std::sort(headers.begin(), headers.end());
        for (const auto& hp : headers) {
            const nlohmann::json hdr = nlohmann::json::parse(detail::read_text(hp));
            const Grid g(hdr["d"].get<int>(), hdr["n"].get<int>(), hdr["L"].get<double>());
            Snapshot snap;
            snap.t = hdr["t"].get<double>();
            snap.field = ComplexField(g);
            fs::path bp = hp;
            bp.replace_extension(".bin");
            std::ifstream bin(bp, std::ios::binary);
            if (!bin) throw std::runtime_error("load: missing snapshot payload " + bp.string());
            bin.seekg(0, std::ios::end);
            const auto bytes = static_cast<std::size_t>(bin.tellg());
            if (bytes != g.size() * 2 * sizeof(float))
                throw std::runtime_error("load: snapshot payload length does not match header n");
            bin.seekg(0);
            for (auto& v : snap.field.values) {
                float re = 0, im = 0;
                bin.read(reinterpret_cast<char*>(&re), sizeof(float));
                bin.read(reinterpret_cast<char*>(&im), sizeof(float));
                v = cplx(re, im);
            }
            const std::string stem = hp.stem().string();
            snap.slice = std::stoi(stem.substr(stem.find('_') + 1));
            record.snapshots.push_back(std::move(snap));
        }
    }
    return record;
}

// Tidy long-format plot data: series,t,value.
inline std::string emit_plot_data(const RunRecord& record, const std::string& kind) {
    std::string out = "series,t,value\n";
    const auto emit = [&](const char* name, const std::vector<double>& v) {
        for (std::size_t m = 0; m < v.size(); ++m)
            out += std::string(name) + "," + format_double(record.t[m]) + "," +
                   format_double(v[m]) + "\n";
    };
    if (kind == "norms") {
        emit("mass", record.mass);
        emit("h1", record.h1);
        emit("h2", record.h2);
        emit("linf", record.linf);
        if (record.has_equiv()) emit("equiv_err", record.equiv_err);
        return out;
    }
    if (kind == "mass-drift") {
        std::vector<double> drift(record.mass.size());
        const double m0 = record.mass.empty() ? 0.0 : record.mass.front();
        for (std::size_t m = 0; m < drift.size(); ++m)
            drift[m] = m0 > 0 ? std::abs(record.mass[m] - m0) / m0 : record.mass[m];
        emit("mass_drift", drift);
        return out;
    }
    if (kind == "refinement") {
        if (record.refinement.empty())
            throw std::runtime_error("emit_plot_data: record carries no refinement study");
        out = "series,level,value\n";
        for (const auto& row : record.refinement)
            out += row.metric + "," + std::to_string(row.level) + "," + format_double(row.value) +
                   "\n";
        return out;
    }
    if (kind == "exponents") {
        out = "scope,d,range\n";
        for (int d = 1; d <= 10; ++d) {
            out += "local-L2," + std::to_string(d) + "," +
                   power_range(d, 0, -1, RangeScope::local_l2).to_string() + "\n";
            out += "local-H1," + std::to_string(d) + "," +
                   power_range(d, 1, -1, RangeScope::local_h1).to_string() + "\n";
            out += "local-H2," + std::to_string(d) + "," +
                   power_range(d, 2, -1, RangeScope::local_h2).to_string() + "\n";
            if (d <= 7)
                out += "H2-smooth," + std::to_string(d) + "," +
                       power_range(d, 2, -1, RangeScope::h2_smooth).to_string() + "\n";
            out += "global-H1(defocusing)," + std::to_string(d) + "," +
                   power_range(d, 1, -1, RangeScope::global_h1).to_string() + "\n";
            out += "global-H1(focusing)," + std::to_string(d) + "," +
                   power_range(d, 1, 1, RangeScope::global_h1).to_string() + "\n";
            if (d <= 7) {
                out += "global-H2(defocusing)," + std::to_string(d) + "," +
                       power_range(d, 2, -1, RangeScope::global_h2).to_string() + "\n";
                out += "global-H2(focusing)," + std::to_string(d) + "," +
                       power_range(d, 2, 1, RangeScope::global_h2).to_string() + "\n";
            }
        }
        return out;
    }
    throw std::runtime_error("emit_plot_data: unknown kind '" + kind + "'");
}

}  // namespace snls
