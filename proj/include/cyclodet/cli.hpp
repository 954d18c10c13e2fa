// SPDX-License-Identifier: Apache-2.0
//
// cyclodet - two-channel passive detection exploiting cyclostationarity
// Copyright (C) 2026 The cyclodet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Experiment runner behind the cyclodet command-line tool: executes one
// manifest and writes its artifact (CSV or JSON) atomically.

#pragma once

#include "cyclodet/config.hpp"
#include "cyclodet/experiments.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cyclodet {

enum class Command { calibrate, roc, sweep, single_trial };
enum class OutputFormat { csv, json };

inline const char* to_string(Command c)
{
    switch (c) {
    case Command::calibrate: return "calibrate";
    case Command::roc: return "roc";
    case Command::sweep: return "sweep";
    case Command::single_trial: return "single-trial";
    }
    return "?";
}

inline std::optional<Command> parse_command(std::string_view s)
{
    if (s == "calibrate") return Command::calibrate;
    if (s == "roc") return Command::roc;
    if (s == "sweep") return Command::sweep;
    if (s == "single-trial") return Command::single_trial;
    return std::nullopt;
}

struct RunManifest {
    Command command = Command::roc;
    std::optional<std::filesystem::path> configPath;
    std::filesystem::path outPath;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::uint64_t> masterSeed; // absent: the config's seed
    std::size_t workerCount = 0;   // 0 = hardware concurrency
    std::size_t trials = 0;        // 0 = command default
    std::vector<double> pfa;       // empty = command default
    std::vector<double> snrGrid;   // empty = -25..0 dB in 2.5 dB steps
    std::vector<DetectorId> detectors{DetectorId::glrt, DetectorId::xcorr};
    /// Null model for thresholds; calibrate defaults to white, sweep to scenario.
    std::optional<NullModel> nullModel;
};

inline std::size_t default_trials(Command c)
{
    switch (c) {
    case Command::calibrate: return 10000;
    case Command::roc: return 2000;
    case Command::sweep: return 1000;
    case Command::single_trial: return 1;
    }
    return 1;
}

/// Shortest decimal string that parses back to the same double.
inline std::string format_number(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_atomically(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(parent))
        throw std::runtime_error("output directory does not exist: " + parent.string());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        os << content;
        os.flush();
        if (!os)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline ScenarioConfig load_config(const std::optional<std::filesystem::path>& path)
{
    if (!path)
        return ScenarioConfig{};
    std::ifstream is(*path);
    if (!is)
        throw ConfigError("cannot read config file: " + path->string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

inline std::vector<double> default_snr_grid()
{
    std::vector<double> g;
    for (int i = -10; i <= 0; ++i)
        g.push_back(2.5 * i);
    return g;
}

struct RunOutput {
    std::string artifact; // file content
    std::string summary;  // one line for standard output
};

namespace detail {

inline nlohmann::json dims_json(const DimSpec& d)
{
    return {{"L", d.L()}, {"P", d.P()}, {"N", d.N()}, {"M", d.M()}};
}

inline nlohmann::json header_json(const RunManifest& m, const ScenarioConfig& cfg, std::size_t trials)
{
    return {{"schema_version", kSchemaVersion},
            {"command", to_string(m.command)},
            {"seed", *m.masterSeed},
            {"trials", trials},
            {"scenario", to_json(cfg)},
            {"dims", dims_json(cfg.dims())}};
}

inline std::string csv_preamble() { return "# schema_version=" + std::to_string(kSchemaVersion) + "\n"; }

inline RunOutput run_calibrate(const RunManifest& m, const ScenarioConfig& cfg, std::size_t trials)
{
    const std::vector<double> pfas = m.pfa.empty() ? std::vector<double>{0.01} : m.pfa;
    const NullModel model = m.nullModel.value_or(NullModel::white);
    std::vector<ThresholdTable> tables;
    for (auto id : m.detectors)
        tables.push_back(model == NullModel::white
                             ? calibrate_threshold(id, cfg.dims(), pfas, trials, *m.masterSeed, m.workerCount)
                             : calibrate_threshold(id, cfg, pfas, trials, *m.masterSeed, m.workerCount));

    RunOutput out;
    if (m.format == OutputFormat::csv) {
        out.artifact = csv_preamble() + "detector,pfa_target,threshold,trials\n";
        for (const auto& t : tables)
            for (std::size_t i = 0; i < t.pfaTargets.size(); ++i)
                out.artifact += std::string(to_string(t.detector)) + "," + format_number(t.pfaTargets[i]) +
                                "," + format_number(t.thresholds[i]) + "," + std::to_string(t.trials) + "\n";
    } else {
        auto j = header_json(m, cfg, trials);
        j["null_model"] = to_string(model);
        j["thresholds"] = nlohmann::json::array();
        for (const auto& t : tables)
            for (std::size_t i = 0; i < t.pfaTargets.size(); ++i)
                j["thresholds"].push_back({{"detector", to_string(t.detector)},
                                           {"pfa_target", t.pfaTargets[i]},
                                           {"threshold", t.thresholds[i]}});
        out.artifact = j.dump(2) + "\n";
    }
    std::ostringstream s;
    s << "calibrate";
    for (const auto& t : tables)
        s << " " << to_string(t.detector) << " eta@" << format_number(t.pfaTargets[0]) << "="
          << format_number(t.thresholds[0]);
    s << " trials=" << trials << " seed=" << *m.masterSeed;
    out.summary = s.str();
    return out;
}

inline RunOutput run_roc(const RunManifest& m, const ScenarioConfig& cfg, std::size_t trials)
{
    const std::vector<double> pfas =
        m.pfa.empty() ? std::vector<double>{0.01, 0.05, 0.1, 0.2} : m.pfa;
    const auto res = roc_curve(cfg, m.detectors, trials, *m.masterSeed, m.workerCount, pfas);

    RunOutput out;
    if (m.format == OutputFormat::csv) {
        out.artifact = csv_preamble() + "detector,pfa,pd,pd_stderr\n";
        for (const auto& d : res.detectors)
            for (const auto& p : d.roc)
                out.artifact += std::string(to_string(d.detector)) + "," + format_number(p.pfa) + "," +
                                format_number(p.pd) + "," + format_number(p.pd_stderr) + "\n";
    } else {
        auto j = header_json(m, cfg, trials);
        j["detectors"] = nlohmann::json::array();
        for (const auto& d : res.detectors) {
            nlohmann::json jd{{"detector", to_string(d.detector)}};
            jd["roc"] = nlohmann::json::array();
            for (const auto& p : d.roc)
                jd["roc"].push_back({{"pfa", p.pfa}, {"pd", p.pd}, {"pd_stderr", p.pd_stderr}});
            jd["operating_points"] = nlohmann::json::array();
            for (const auto& op : d.operating)
                jd["operating_points"].push_back({{"pfa", op.pfa},
                                                  {"threshold", op.threshold},
                                                  {"pd", op.pd.p},
                                                  {"pd_stderr", op.pd.standard_error()}});
            j["detectors"].push_back(std::move(jd));
        }
        out.artifact = j.dump(2) + "\n";
    }
    std::ostringstream s;
    s << "roc";
    for (const auto& d : res.detectors)
        for (const auto& op : d.operating)
            s << " " << to_string(d.detector) << " pd@" << format_number(op.pfa) << "="
              << format_number(op.pd.p);
    s << " trials=" << trials << " seed=" << *m.masterSeed << " wall=" << res.wallSeconds << "s";
    out.summary = s.str();
    return out;
}

inline RunOutput run_sweep(const RunManifest& m, const ScenarioConfig& cfg, std::size_t trials)
{
    const double pfa = m.pfa.empty() ? 0.01 : m.pfa.front();
    const std::vector<double> grid = m.snrGrid.empty() ? default_snr_grid() : m.snrGrid;
    SweepOptions opts;
    opts.nullModel = m.nullModel.value_or(NullModel::scenario);
    const auto res = pd_vs_snr(cfg, grid, pfa, trials, *m.masterSeed, m.detectors, m.workerCount, opts);

    RunOutput out;
    if (m.format == OutputFormat::csv) {
        out.artifact = csv_preamble() + "detector,snr_db,pd,pd_stderr\n";
        for (const auto& d : res.detectors)
            for (const auto& p : d.sweep)
                out.artifact += std::string(to_string(d.detector)) + "," + format_number(p.snr_db) + "," +
                                format_number(p.pd.p) + "," + format_number(p.pd.standard_error()) + "\n";
    } else {
        auto j = header_json(m, cfg, trials);
        j["pfa"] = pfa;
        j["null_model"] = to_string(opts.nullModel);
        j["detectors"] = nlohmann::json::array();
        for (const auto& d : res.detectors) {
            nlohmann::json jd{{"detector", to_string(d.detector)}};
            jd["points"] = nlohmann::json::array();
            for (const auto& p : d.sweep)
                jd["points"].push_back({{"snr_db", p.snr_db},
                                        {"threshold", p.threshold},
                                        {"pd", p.pd.p},
                                        {"pd_stderr", p.pd.standard_error()}});
            j["detectors"].push_back(std::move(jd));
        }
        out.artifact = j.dump(2) + "\n";
    }
    std::ostringstream s;
    s << "sweep pfa=" << format_number(pfa);
    for (const auto& d : res.detectors)
        s << " " << to_string(d.detector) << " pd@" << format_number(d.sweep.back().snr_db)
          << "dB=" << format_number(d.sweep.back().pd.p);
    s << " trials=" << trials << " seed=" << *m.masterSeed << " wall=" << res.wallSeconds << "s";
    out.summary = s.str();
    return out;
}

inline RunOutput run_single_trial(const RunManifest& m, const ScenarioConfig& cfg, std::size_t trials)
{
    std::vector<std::pair<Hypothesis, StatTable>> rows;
    for (auto h : {Hypothesis::H0, Hypothesis::H1})
        rows.emplace_back(h, scenario_statistics(cfg, h, trials, *m.masterSeed, m.detectors, m.workerCount));

    RunOutput out;
    if (m.format == OutputFormat::csv) {
        out.artifact = csv_preamble() + "detector,hypothesis,statistic\n";
        for (auto id : m.detectors)
            for (const auto& [h, table] : rows)
                for (double v : table.at(id))
                    out.artifact += std::string(to_string(id)) + "," + to_string(h) + "," +
                                    format_number(v) + "\n";
    } else {
        auto j = header_json(m, cfg, trials);
        j["statistics"] = nlohmann::json::array();
        for (auto id : m.detectors)
            for (const auto& [h, table] : rows)
                j["statistics"].push_back(
                    {{"detector", to_string(id)}, {"hypothesis", to_string(h)}, {"values", table.at(id)}});
        out.artifact = j.dump(2) + "\n";
    }
    std::ostringstream s;
    s << "single-trial";
    for (auto id : m.detectors)
        for (const auto& [h, table] : rows)
            s << " " << to_string(id) << "/" << to_string(h) << "=" << format_number(table.at(id).front());
    s << " seed=" << *m.masterSeed;
    out.summary = s.str();
    return out;
}

} // namespace detail

/// Executes the manifest, writes the artifact to outPath and returns the
/// one-line summary. Throws on any failure; nothing is written then.
inline std::string run(RunManifest manifest)
{
    if (manifest.detectors.empty())
        throw std::invalid_argument("no detectors requested");
    // Artifact rows are ordered by detector name.
    std::sort(manifest.detectors.begin(), manifest.detectors.end());
    manifest.detectors.erase(std::unique(manifest.detectors.begin(), manifest.detectors.end()),
                             manifest.detectors.end());
    const auto start = std::chrono::steady_clock::now();

    ScenarioConfig cfg = load_config(manifest.configPath);
    manifest.masterSeed = manifest.masterSeed.value_or(cfg.seed);
    cfg.seed = *manifest.masterSeed;
    const std::size_t trials = manifest.trials ? manifest.trials : default_trials(manifest.command);

    RunOutput out;
    switch (manifest.command) {
    case Command::calibrate: out = detail::run_calibrate(manifest, cfg, trials); break;
    case Command::roc: out = detail::run_roc(manifest, cfg, trials); break;
    case Command::sweep: out = detail::run_sweep(manifest, cfg, trials); break;
    case Command::single_trial: out = detail::run_single_trial(manifest, cfg, trials); break;
    }
    write_atomically(manifest.outPath, out.artifact);
    if (manifest.command == Command::calibrate || manifest.command == Command::single_trial) {
        std::ostringstream s;
        s << " wall=" << elapsed_seconds(start) << "s";
        out.summary += s.str();
    }
    return out.summary;
}

} // namespace cyclodet
