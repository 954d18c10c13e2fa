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

// Monte Carlo harness: null-threshold calibration, detection-rate
// estimation, ROC curves and Pd-vs-SNR sweeps.
//
// Every trial derives its RNG substreams from (master seed, purpose tag,
// hypothesis, trial index). Results are stored by trial index, so outputs do
// not depend on the worker count.

#pragma once

#include "cyclodet/detectors.hpp"
#include "cyclodet/rng.hpp"
#include "cyclodet/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace cyclodet {

/// Seed-derivation tags; keep distinct so experiments never share streams.
enum class Purpose : std::uint64_t { white_null = 1, scenario_trial = 2 };

/// Runs fn(i) for i in [0, n) on `workers` threads (0 = hardware concurrency).
/// The first exception thrown by any task is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex errorMutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(errorMutex);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

using StatTable = std::map<DetectorId, std::vector<double>>;

/// Per-trial statistics of full-pipeline trials (synthesis + stacking).
inline StatTable scenario_statistics(const ScenarioConfig& cfg, Hypothesis hyp, std::size_t trials,
                                     std::uint64_t seed, std::span<const DetectorId> detectors,
                                     std::size_t workers = 0, double loading = 0.0)
{
    cfg.validate();
    const DimSpec dims = cfg.dims();
    StatTable out;
    for (auto id : detectors)
        out[id].assign(trials, 0.0);
    const StreamSeeder base = StreamSeeder(seed)
                                  .child(static_cast<std::uint64_t>(Purpose::scenario_trial))
                                  .child(hyp == Hypothesis::H0 ? 0 : 1);
    parallel_for(trials, workers, [&](std::size_t t) {
        const ObservationPair obs = synth_observation(cfg, hyp, base.child(t));
        const SnapshotBatch batch = stack_snapshots(obs, dims);
        for (auto id : detectors)
            out.at(id)[t] = evaluate(id, batch, loading).statistic;
    });
    return out;
}

/// Per-trial statistics of null batches drawn directly as white Gaussian
/// snapshots. The GLR is invariant to S_0-structured filtering, so this null
/// stands in for any noise covariance of that structure.
inline StatTable white_null_statistics(const DimSpec& dims, std::size_t trials, std::uint64_t seed,
                                       std::span<const DetectorId> detectors,
                                       std::size_t workers = 0, double loading = 0.0)
{
    StatTable out;
    for (auto id : detectors)
        out[id].assign(trials, 0.0);
    const StreamSeeder base =
        StreamSeeder(seed).child(static_cast<std::uint64_t>(Purpose::white_null));
    parallel_for(trials, workers, [&](std::size_t t) {
        Rng rng = base.stream(t);
        const SnapshotBatch batch = white_null_batch(dims, rng);
        for (auto id : detectors)
            out.at(id)[t] = evaluate(id, batch, loading).statistic;
    });
    return out;
}

// ------------------------------------------------------------------------
// Rates and quantiles
// ------------------------------------------------------------------------

/// Empirical probability with its binomial standard error.
struct Rate {
    double p = 0.0;
    std::size_t trials = 0;

    double standard_error() const
    {
        return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
};

/// Linear interpolation between order statistics (the usual "type 7").
inline double empirical_quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("empirical_quantile: no values");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("empirical_quantile: q outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

/// Fraction of statistics strictly above the threshold (decide H1).
inline Rate exceedance(std::span<const double> stats, double threshold)
{
    const auto hits = std::count_if(stats.begin(), stats.end(),
                                    [&](double s) { return s > threshold; });
    return {stats.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(stats.size()),
            stats.size()};
}

// ------------------------------------------------------------------------
// Threshold calibration
// ------------------------------------------------------------------------

enum class NullModel { white, scenario };

inline const char* to_string(NullModel m) { return m == NullModel::white ? "white" : "scenario"; }

struct ThresholdTable {
    DetectorId detector = DetectorId::glrt;
    DimSpec dims{1, 1, 1, 2};
    std::vector<double> pfaTargets;
    std::vector<double> thresholds;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    NullModel nullModel = NullModel::white;

    double threshold_for(double pfa) const
    {
        for (std::size_t i = 0; i < pfaTargets.size(); ++i)
            if (pfaTargets[i] == pfa)
                return thresholds[i];
        throw std::out_of_range("ThresholdTable: pfa target not calibrated");
    }
};

namespace detail {

inline void check_calibration_request(std::span<const double> pfaTargets, std::size_t trials)
{
    if (pfaTargets.empty())
        throw std::invalid_argument("calibrate_threshold: no pfa targets");
    for (double p : pfaTargets)
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("calibrate_threshold: pfa targets must lie in (0, 1)");
    const double minPfa = *std::min_element(pfaTargets.begin(), pfaTargets.end());
    if (static_cast<double>(trials) < 10.0 / minPfa)
        throw InsufficientTrials("calibrate_threshold: " + std::to_string(trials) +
                                 " trials cannot resolve pfa " + std::to_string(minPfa) +
                                 " (need at least " + std::to_string(10.0 / minPfa) + ")");
}

inline ThresholdTable make_table(DetectorId id, const DimSpec& dims, std::span<const double> pfas,
                                 const std::vector<double>& nullStats, std::uint64_t seed,
                                 NullModel model)
{
    ThresholdTable table;
    table.detector = id;
    table.dims = dims;
    table.pfaTargets.assign(pfas.begin(), pfas.end());
    table.trials = nullStats.size();
    table.seed = seed;
    table.nullModel = model;
    for (double p : pfas)
        table.thresholds.push_back(empirical_quantile(nullStats, 1.0 - p));
    return table;
}

} // namespace detail

/// Thresholds eta with P(stat > eta | H0) = pfa, from white-null trials.
inline ThresholdTable calibrate_threshold(DetectorId id, const DimSpec& dims,
                                          std::span<const double> pfaTargets, std::size_t trials,
                                          std::uint64_t seed, std::size_t workers = 0)
{
    detail::check_calibration_request(pfaTargets, trials);
    const std::array ids{id};
    const auto stats = white_null_statistics(dims, trials, seed, ids, workers);
    return detail::make_table(id, dims, pfaTargets, stats.at(id), seed, NullModel::white);
}

/// Same, but from full-pipeline H0 trials of a concrete scenario.
inline ThresholdTable calibrate_threshold(DetectorId id, const ScenarioConfig& cfg,
                                          std::span<const double> pfaTargets, std::size_t trials,
                                          std::uint64_t seed, std::size_t workers = 0)
{
    detail::check_calibration_request(pfaTargets, trials);
    const std::array ids{id};
    const auto stats = scenario_statistics(cfg, Hypothesis::H0, trials, seed, ids, workers);
    return detail::make_table(id, cfg.dims(), pfaTargets, stats.at(id), seed, NullModel::scenario);
}

struct RateEstimate {
    Rate pfa;
    Rate pd;
};

/// Empirical false-alarm and detection rates at a fixed threshold.
inline RateEstimate estimate_rates(const ScenarioConfig& cfg, DetectorId id, double threshold,
                                   std::size_t trials, std::uint64_t seed, std::size_t workers = 0)
{
    if (trials == 0)
        throw std::invalid_argument("estimate_rates: trials must be positive");
    const std::array ids{id};
    const auto h0 = scenario_statistics(cfg, Hypothesis::H0, trials, seed, ids, workers);
    const auto h1 = scenario_statistics(cfg, Hypothesis::H1, trials, seed, ids, workers);
    return {exceedance(h0.at(id), threshold), exceedance(h1.at(id), threshold)};
}

// ------------------------------------------------------------------------
// ROC and Pd-vs-SNR
// ------------------------------------------------------------------------

struct RocPoint {
    double pfa = 0.0;
    double pd = 0.0;
    double pd_stderr = 0.0;
};

struct OperatingPoint {
    double pfa = 0.0;       // target
    double threshold = 0.0;
    Rate pd;
};

struct SweepPoint {
    double snr_db = 0.0;
    double threshold = 0.0;
    Rate pd;
};

struct DetectorResult {
    DetectorId detector = DetectorId::glrt;
    std::vector<double> h0, h1; // per-trial statistics
    std::vector<RocPoint> roc;
    std::vector<OperatingPoint> operating;
    std::vector<SweepPoint> sweep;
};

struct ExperimentResult {
    ScenarioConfig scenario;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<DetectorResult> detectors;
    double wallSeconds = 0.0;

    const DetectorResult& at(DetectorId id) const
    {
        for (const auto& d : detectors)
            if (d.detector == id)
                return d;
        throw std::out_of_range("ExperimentResult: detector not present");
    }
};

/// ROC by sweeping the threshold over the pooled statistics. Points run
/// from (0, 0) to (1, 1) with both coordinates non-decreasing.
inline std::vector<RocPoint> roc_from_statistics(std::vector<double> h0, std::vector<double> h1)
{
    if (h0.empty() || h1.empty())
        throw std::invalid_argument("roc_from_statistics: empty statistics");
    std::sort(h0.begin(), h0.end());
    std::sort(h1.begin(), h1.end());
    std::vector<double> pooled;
    pooled.reserve(h0.size() + h1.size());
    std::merge(h0.begin(), h0.end(), h1.begin(), h1.end(), std::back_inserter(pooled));
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

    const auto n0 = static_cast<double>(h0.size());
    const auto n1 = static_cast<double>(h1.size());
    auto countAtLeast = [](const std::vector<double>& v, double t) {
        return static_cast<double>(v.end() - std::lower_bound(v.begin(), v.end(), t));
    };

    std::vector<RocPoint> roc;
    roc.reserve(pooled.size() + 1);
    roc.push_back({0.0, 0.0, 0.0});
    for (auto it = pooled.rbegin(); it != pooled.rend(); ++it) {
        const double pfa = countAtLeast(h0, *it) / n0;
        const double pd = countAtLeast(h1, *it) / n1;
        roc.push_back({pfa, pd, std::sqrt(pd * (1.0 - pd) / n1)});
    }
    return roc;
}

/// Pd at the threshold whose empirical null exceedance is `pfa`.
inline OperatingPoint operating_point(const std::vector<double>& h0, const std::vector<double>& h1,
                                      double pfa)
{
    const double eta = empirical_quantile(h0, 1.0 - pfa);
    return {pfa, eta, exceedance(h1, eta)};
}

inline double elapsed_seconds(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Statistics under both hypotheses, computed once, then swept into ROCs.
inline ExperimentResult roc_curve(const ScenarioConfig& cfg, std::span<const DetectorId> detectors,
                                  std::size_t trials, std::uint64_t seed, std::size_t workers = 0,
                                  std::span<const double> pfaTargets = {})
{
    if (trials < 100)
        throw InsufficientTrials("roc_curve: at least 100 trials per hypothesis required");
    const auto start = std::chrono::steady_clock::now();
    auto h0 = scenario_statistics(cfg, Hypothesis::H0, trials, seed, detectors, workers);
    auto h1 = scenario_statistics(cfg, Hypothesis::H1, trials, seed, detectors, workers);

    ExperimentResult res;
    res.scenario = cfg;
    res.seed = seed;
    res.trials = trials;
    for (auto id : detectors) {
        DetectorResult d;
        d.detector = id;
        d.h0 = std::move(h0.at(id));
        d.h1 = std::move(h1.at(id));
        d.roc = roc_from_statistics(d.h0, d.h1);
        for (double p : pfaTargets)
            d.operating.push_back(operating_point(d.h0, d.h1, p));
        res.detectors.push_back(std::move(d));
    }
    res.wallSeconds = elapsed_seconds(start);
    return res;
}

struct SweepOptions {
    NullModel nullModel = NullModel::scenario;
    /// White-null calibration trials; 0 means max(trialsPerPoint, 10/pfa).
    std::size_t calibrationTrials = 0;
};

/// Pd versus SNR with snr_s = snr_r = grid value.
///
/// With the scenario null, every grid point gets its own threshold from
/// trialsPerPoint independent full-pipeline H0 trials. With the white null,
/// one threshold per detector is calibrated up front and reused.
inline ExperimentResult pd_vs_snr(const ScenarioConfig& base, std::span<const double> snrGrid_dB,
                                  double pfa, std::size_t trialsPerPoint, std::uint64_t seed,
                                  std::span<const DetectorId> detectors, std::size_t workers = 0,
                                  SweepOptions opts = {})
{
    if (snrGrid_dB.empty())
        throw std::invalid_argument("pd_vs_snr: empty SNR grid");
    if (!std::is_sorted(snrGrid_dB.begin(), snrGrid_dB.end()))
        throw std::invalid_argument("pd_vs_snr: SNR grid must be sorted ascending");
    if (!(pfa > 0.0 && pfa < 1.0))
        throw std::invalid_argument("pd_vs_snr: pfa must lie in (0, 1)");
    if (trialsPerPoint == 0)
        throw std::invalid_argument("pd_vs_snr: trialsPerPoint must be positive");
    base.validate();

    const auto start = std::chrono::steady_clock::now();
    std::map<DetectorId, double> whiteEta;
    if (opts.nullModel == NullModel::white) {
        std::size_t ct = opts.calibrationTrials;
        if (ct == 0)
            ct = std::max(trialsPerPoint, static_cast<std::size_t>(std::ceil(10.0 / pfa)));
        const std::array pf{pfa};
        for (auto id : detectors)
            whiteEta[id] = calibrate_threshold(id, base.dims(), pf, ct, seed, workers).thresholds[0];
    }

    ExperimentResult res;
    res.scenario = base;
    res.seed = seed;
    res.trials = trialsPerPoint;
    for (auto id : detectors) {
        DetectorResult d;
        d.detector = id;
        res.detectors.push_back(std::move(d));
    }

    for (double snr : snrGrid_dB) {
        ScenarioConfig cfg = base;
        cfg.snr_s_dB = snr;
        cfg.snr_r_dB = snr;
        const auto h1 = scenario_statistics(cfg, Hypothesis::H1, trialsPerPoint, seed, detectors, workers);
        StatTable h0;
        if (opts.nullModel == NullModel::scenario)
            h0 = scenario_statistics(cfg, Hypothesis::H0, trialsPerPoint, seed, detectors, workers);
        for (auto& d : res.detectors) {
            const double eta = opts.nullModel == NullModel::scenario
                                   ? empirical_quantile(h0.at(d.detector), 1.0 - pfa)
                                   : whiteEta.at(d.detector);
            d.sweep.push_back({snr, eta, exceedance(h1.at(d.detector), eta)});
        }
    }
    res.wallSeconds = elapsed_seconds(start);
    return res;
}

} // namespace cyclodet
