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


#include "catch_amalgamated.hpp"
#include "cyclodet/experiments.hpp"

#include <random>

using namespace cyclodet;
using Catch::Matchers::WithinAbs;

namespace {

const std::array glrtOnly{DetectorId::glrt};
const std::array both{DetectorId::glrt, DetectorId::xcorr};

} // namespace

TEST_CASE("empirical_quantile")
{
    CHECK(empirical_quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5) == 3.0);
    CHECK(empirical_quantile({5.0, 1.0, 4.0, 2.0, 3.0}, 0.0) == 1.0);
    CHECK(empirical_quantile({5.0, 1.0, 4.0, 2.0, 3.0}, 1.0) == 5.0);
    CHECK_THAT(empirical_quantile({0.0, 10.0}, 0.25), WithinAbs(2.5, 1e-15));
    CHECK_THROWS(empirical_quantile({}, 0.5));
}

TEST_CASE("exceedance is strict")
{
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(exceedance(v, 2.0).p == 0.5);
    CHECK(exceedance(v, 4.0).p == 0.0);
    CHECK(exceedance(v, 0.0).p == 1.0);
    CHECK_THAT(exceedance(v, 2.0).standard_error(), WithinAbs(0.25, 1e-15));
}

TEST_CASE("calibrate_threshold - white null reproduces its own pfa")
{
    const DimSpec d(1, 1, 1, 16);
    const std::array pf{0.01};
    const auto table = calibrate_threshold(DetectorId::glrt, d, pf, 100000, 1);
    CHECK(table.trials == 100000);
    CHECK(table.nullModel == NullModel::white);
    const auto fresh = white_null_statistics(d, 100000, 2, glrtOnly);
    const double pfa = exceedance(fresh.at(DetectorId::glrt), table.threshold_for(0.01)).p;
    CHECK(pfa >= 0.008);
    CHECK(pfa <= 0.012);
}

TEST_CASE("calibrate_threshold - request validation")
{
    const DimSpec d(1, 1, 1, 16);
    const std::array pf{0.01};
    CHECK_THROWS_AS(calibrate_threshold(DetectorId::glrt, d, pf, 50, 1), InsufficientTrials);
    const std::array bad{1.5};
    CHECK_THROWS_AS(calibrate_threshold(DetectorId::glrt, d, bad, 1000, 1), std::invalid_argument);
    const auto table = calibrate_threshold(DetectorId::glrt, d, pf, 1000, 1);
    CHECK_THROWS_AS(table.threshold_for(0.05), std::out_of_range);
}

TEST_CASE("calibrate_threshold - thresholds decrease with pfa")
{
    ScenarioConfig cfg;
    cfg.N = 4;
    cfg.M = 16;
    const std::array pf{0.1, 0.05, 0.01};
    for (auto id : both) {
        const auto t = calibrate_threshold(id, cfg, pf, 1000, 3, 0);
        CHECK(t.nullModel == NullModel::scenario);
        CHECK(t.threshold_for(0.1) <= t.threshold_for(0.05));
        CHECK(t.threshold_for(0.05) <= t.threshold_for(0.01));
        const auto again = scenario_statistics(cfg, Hypothesis::H0, 1000, 3, std::array{id});
        for (double p : pf)
            CHECK_THAT(exceedance(again.at(id), t.threshold_for(p)).p, WithinAbs(p, 1.0 / 1000 + 1e-12));
    }
}

TEST_CASE("estimate_rates - degenerate thresholds")
{
    ScenarioConfig cfg;
    cfg.N = 4;
    cfg.M = 16;
    const double inf = std::numeric_limits<double>::infinity();
    auto lo = estimate_rates(cfg, DetectorId::glrt, -inf, 20, 4);
    CHECK(lo.pfa.p == 1.0);
    CHECK(lo.pd.p == 1.0);
    auto hi = estimate_rates(cfg, DetectorId::glrt, inf, 20, 4);
    CHECK(hi.pfa.p == 0.0);
    CHECK(hi.pd.p == 0.0);
}

TEST_CASE("estimate_rates - high SNR detection")
{
    ScenarioConfig cfg;
    cfg.snr_s_dB = cfg.snr_r_dB = 20.0;
    const std::array pf{0.01};
    const double eta = calibrate_threshold(DetectorId::glrt, cfg.dims(), pf, 2000, 5).thresholds[0];
    const auto r = estimate_rates(cfg, DetectorId::glrt, eta, 500, 6);
    CHECK(r.pd.p > 0.99);
}

TEST_CASE("roc_from_statistics")
{
    SECTION("perfect separation passes through (0, 1)")
    {
        const auto roc = roc_from_statistics({0.1, 0.2, 0.3}, {1.0, 2.0});
        CHECK(roc.front().pfa == 0.0);
        CHECK(roc.front().pd == 0.0);
        CHECK(roc.back().pfa == 1.0);
        CHECK(roc.back().pd == 1.0);
        bool corner = false;
        for (const auto& p : roc)
            corner |= p.pfa == 0.0 && p.pd == 1.0;
        CHECK(corner);
    }
    SECTION("identical distributions follow the chance line")
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g;
        std::vector<double> a(4000), b(4000);
        for (auto& x : a)
            x = g(rng);
        for (auto& x : b)
            x = g(rng);
        for (const auto& p : roc_from_statistics(a, b)) {
            const double se = std::sqrt(2.0 * std::max(p.pfa * (1 - p.pfa), 1.0 / 4000) / 4000);
            CHECK(std::abs(p.pd - p.pfa) < 3.0 * se + 0.01);
        }
    }
    SECTION("monotone and bounded on random inputs")
    {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u;
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> a(1 + rng() % 50), b(1 + rng() % 50);
            for (auto& x : a)
                x = std::floor(10 * u(rng));
            for (auto& x : b)
                x = std::floor(10 * u(rng) + 2);
            const auto roc = roc_from_statistics(a, b);
            for (std::size_t i = 1; i < roc.size(); ++i) {
                CHECK(roc[i].pfa >= roc[i - 1].pfa);
                CHECK(roc[i].pd >= roc[i - 1].pd);
            }
            CHECK(roc.back().pfa == 1.0);
            CHECK(roc.back().pd == 1.0);
        }
    }
    CHECK_THROWS_AS(roc_from_statistics({}, {1.0}), std::invalid_argument);
}

TEST_CASE("roc_curve")
{
    ScenarioConfig cfg;
    cfg.N = 4;
    cfg.M = 16;
    CHECK_THROWS_AS(roc_curve(cfg, both, 50, 1), InsufficientTrials);

    const std::array pf{0.1};
    const auto res = roc_curve(cfg, both, 200, 9, 0, pf);
    REQUIRE(res.detectors.size() == 2);
    for (const auto& d : res.detectors) {
        CHECK(d.h0.size() == 200);
        CHECK(d.h1.size() == 200);
        REQUIRE(d.operating.size() == 1);
        CHECK(exceedance(d.h0, d.operating[0].threshold).p <= 0.1);
    }
}

TEST_CASE("results do not depend on the worker count")
{
    ScenarioConfig cfg;
    cfg.N = 4;
    cfg.M = 16;
    const auto a = scenario_statistics(cfg, Hypothesis::H1, 64, 11, both, 1);
    const auto b = scenario_statistics(cfg, Hypothesis::H1, 64, 11, both, 3);
    const auto c = scenario_statistics(cfg, Hypothesis::H1, 64, 11, both, 8);
    CHECK(a == b);
    CHECK(a == c);
    const auto w1 = white_null_statistics(cfg.dims(), 64, 11, both, 1);
    const auto w4 = white_null_statistics(cfg.dims(), 64, 11, both, 4);
    CHECK(w1 == w4);
    CHECK(scenario_statistics(cfg, Hypothesis::H1, 8, 12, both, 1) != a);
}

TEST_CASE("parallel_for propagates exceptions")
{
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 37)
                                         throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("pd_vs_snr")
{
    ScenarioConfig cfg;
    cfg.N = 4;
    cfg.M = 16;
    const std::array unsorted{0.0, -5.0};
    CHECK_THROWS_AS(pd_vs_snr(cfg, unsorted, 0.1, 10, 1, both), std::invalid_argument);
    const std::array grid{-40.0, 40.0};
    CHECK_THROWS_AS(pd_vs_snr(cfg, grid, 1.0, 10, 1, both), std::invalid_argument);

    const auto res = pd_vs_snr(cfg, grid, 0.1, 400, 2, both);
    for (const auto& d : res.detectors) {
        REQUIRE(d.sweep.size() == 2);
        // Far below the noise floor Pd collapses to the false-alarm rate.
        CHECK(std::abs(d.sweep[0].pd.p - 0.1) < 4.0 * std::sqrt(0.1 * 0.9 / 400) + 0.02);
        CHECK(d.sweep[1].pd.p > 0.95);
    }

    const auto white = pd_vs_snr(cfg, grid, 0.1, 200, 2, glrtOnly, 0, {NullModel::white, 1000});
    CHECK(white.at(DetectorId::glrt).sweep[0].threshold == white.at(DetectorId::glrt).sweep[1].threshold);
    CHECK(white.at(DetectorId::glrt).sweep[1].pd.p > 0.95);
}
