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

// cyclodet <calibrate|roc|sweep|single-trial> --config <path> --out <path>
//          --format <csv|json> --seed <u64> --trials <n> --workers <n>

#include "cyclodet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

namespace {

int fail(const std::string& kind, const std::string& message)
{
    nlohmann::json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace cyclodet;

    CLI::App app{"Two-channel cyclostationary passive detection experiments"};

    std::string command;
    std::string configPath, outPath, format = "csv", nullModel;
    std::uint64_t seed = 0;
    std::size_t trials = 0, workers = 0;
    std::vector<double> pfa, snrGrid;
    std::vector<std::string> detectors{"glrt", "xcorr"};

    app.add_option("command", command, "calibrate | roc | sweep | single-trial")
        ->required()
        ->check(CLI::IsMember({"calibrate", "roc", "sweep", "single-trial"}));
    app.add_option("--config", configPath, "Scenario JSON (defaults when omitted)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", outPath, "Output artifact path")->required();
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* seedOpt = app.add_option("--seed", seed, "Master seed (env CYCLODET_SEED if omitted)");
    app.add_option("--trials", trials, "Monte Carlo trials (per hypothesis / per point)");
    app.add_option("--workers", workers, "Worker threads, 0 = all cores");
    app.add_option("--pfa", pfa, "False-alarm targets")->delimiter(',');
    app.add_option("--snr-grid", snrGrid, "Sweep grid in dB, ascending")->delimiter(',');
    app.add_option("--detector", detectors, "glrt, xcorr")
        ->delimiter(',')
        ->check(CLI::IsMember({"glrt", "xcorr"}));
    app.add_option("--null", nullModel, "Threshold null model: white or scenario")
        ->check(CLI::IsMember({"white", "scenario"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        return fail("UsageError", e.what());
    }

    RunManifest m;
    m.command = *parse_command(command);
    if (!configPath.empty())
        m.configPath = configPath;
    m.outPath = outPath;
    m.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    m.workerCount = workers;
    m.trials = trials;
    m.pfa = pfa;
    m.snrGrid = snrGrid;
    m.detectors.clear();
    for (const auto& d : detectors)
        m.detectors.push_back(*parse_detector(d));
    if (!nullModel.empty())
        m.nullModel = nullModel == "white" ? NullModel::white : NullModel::scenario;

    if (*seedOpt) {
        m.masterSeed = seed;
    } else if (const char* env = std::getenv("CYCLODET_SEED")) {
        try {
            m.masterSeed = std::stoull(env);
        } catch (const std::exception&) {
            return fail("UsageError", std::string("CYCLODET_SEED is not an unsigned integer: ") + env);
        }
    }

    try {
        std::cout << run(m) << std::endl;
    } catch (const ConfigError& e) {
        return fail("ConfigError", e.what());
    } catch (const InsufficientTrials& e) {
        return fail("InsufficientTrials", e.what());
    } catch (const NotPositiveDefinite& e) {
        return fail("NotPositiveDefinite", e.what());
    } catch (const DimensionError& e) {
        return fail("DimensionError", e.what());
    } catch (const std::exception& e) {
        return fail("RuntimeError", e.what());
    }
    return 0;
}
