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
#include "cyclodet/detectors.hpp"
#include "cyclodet/experiments.hpp"
#include "oracles.hpp"

#include <random>

using namespace cyclodet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SnapshotBatch random_batch(std::mt19937_64& rng, const DimSpec& d, Eigen::Index count)
{
    return SnapshotBatch(d, oracle::random_complex(rng, static_cast<Eigen::Index>(d.vecLen()), count));
}

SampleCovariance cov_from(const DimSpec& d, CMatrix Q) { return SampleCovariance(d, std::move(Q)); }

/// Random invertible matrix with the S_0 structure: L-blocks on the
/// surveillance half, LP-blocks on the reference half.
CMatrix random_s0_structured(std::mt19937_64& rng, const DimSpec& d)
{
    const auto L = static_cast<Eigen::Index>(d.L());
    const auto LP = static_cast<Eigen::Index>(d.groupLen());
    const auto half = static_cast<Eigen::Index>(d.halfLen());
    CMatrix G = CMatrix::Zero(2 * half, 2 * half);
    for (Eigen::Index k = 0; k < half / L; ++k)
        G.block(k * L, k * L, L, L) = oracle::random_complex(rng, L, L) + 2.0 * CMatrix::Identity(L, L);
    for (Eigen::Index k = 0; k < half / LP; ++k)
        G.block(half + k * LP, half + k * LP, LP, LP) =
            oracle::random_complex(rng, LP, LP) + 2.0 * CMatrix::Identity(LP, LP);
    return G;
}

} // namespace

TEST_CASE("sample_covariance")
{
    SECTION("single all-ones snapshot")
    {
        const DimSpec d(1, 1, 1, 2);
        const auto Q = sample_covariance(SnapshotBatch(d, CMatrix::Ones(2, 1)));
        CHECK(Q.Q() == CMatrix::Ones(2, 2));
    }
    SECTION("law of large numbers")
    {
        std::mt19937_64 rng(1);
        const DimSpec d(1, 1, 2, 2);
        const auto Q = sample_covariance(random_batch(rng, d, 100000));
        CHECK((Q.Q() - CMatrix::Identity(4, 4)).norm() < 0.05);
    }
    SECTION("rank is at most M")
    {
        std::mt19937_64 rng(2);
        const DimSpec d(2, 2, 2, 8);
        const auto Q = sample_covariance(random_batch(rng, d, 8));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(Q.Q());
        const auto ev = es.eigenvalues();
        int positive = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            positive += ev[i] > 1e-10 * ev.maxCoeff();
        CHECK(positive <= 8);
        CHECK((Q.Q() - Q.Q().adjoint()).norm() == 0.0);
    }
    SECTION("empty or mis-sized batches")
    {
        const DimSpec d(1, 1, 1, 2);
        CHECK_THROWS_AS(SnapshotBatch(d, CMatrix::Zero(2, 0)), DimensionError);
        CHECK_THROWS_AS(SnapshotBatch(d, CMatrix::Zero(3, 2)), DimensionError);
    }
}

TEST_CASE("mle_h0")
{
    SECTION("identity")
    {
        const DimSpec d(2, 2, 2, 8);
        const auto [s, r] = mle_h0(cov_from(d, CMatrix::Identity(16, 16)));
        CHECK(s.blocks.size() == 4);
        CHECK(r.blocks.size() == 2);
        for (const auto& b : s.blocks)
            CHECK(b == CMatrix::Identity(2, 2));
        for (const auto& b : r.blocks)
            CHECK(b == CMatrix::Identity(4, 4));
    }
    SECTION("scalar case")
    {
        CMatrix Q(2, 2);
        Q << 3.0, cdouble(0.5, 0.2), cdouble(0.5, -0.2), 7.0;
        const auto [s, r] = mle_h0(cov_from(DimSpec(1, 1, 1, 2), Q));
        CHECK(s.blocks[0](0, 0) == 3.0);
        CHECK(r.blocks[0](0, 0) == 7.0);
    }
    SECTION("random Q, slicing oracle")
    {
        std::mt19937_64 rng(3);
        const DimSpec d(2, 2, 2, 8);
        const CMatrix Q = oracle::random_hermitian_pd(rng, 16);
        const auto [s, r] = mle_h0(cov_from(d, Q));
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(s.blocks[k](i, j) == Q(2 * k + i, 2 * k + j));
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    CHECK(r.blocks[k](i, j) == Q(8 + 4 * k + i, 8 + 4 * k + j));
    }
}

TEST_CASE("mle_h1")
{
    SECTION("identity")
    {
        const DimSpec d(2, 2, 2, 8);
        const auto est = mle_h1(cov_from(d, CMatrix::Identity(16, 16)));
        CHECK(est.blocks.size() == 2);
        CHECK(est.blockSize == 8);
        for (const auto& b : est.blocks)
            CHECK(b == CMatrix::Identity(8, 8));
    }
    SECTION("scalar case")
    {
        std::mt19937_64 rng(4);
        const CMatrix Q = oracle::random_hermitian_pd(rng, 2);
        const auto est = mle_h1(cov_from(DimSpec(1, 1, 1, 2), Q));
        CHECK(est.blocks[0] == Q);
    }
    SECTION("random Q, dense T conjugation")
    {
        std::mt19937_64 rng(5);
        const DimSpec d(1, 2, 2, 4);
        const CMatrix Q = oracle::random_hermitian_pd(rng, 8);
        const auto est = mle_h1(cov_from(d, Q));
        const CMatrix T = oracle::T_matrix(1, 2, 2).cast<cdouble>();
        const CMatrix Qt = T.transpose() * Q * T;
        CHECK((est.dense() - oracle::block_diag_dense(Qt, 4)).norm() < 1e-14);
        CHECK(est.is_hermitian());
    }
}

TEST_CASE("glrt_cyclo - closed forms")
{
    CHECK(glrt_cyclo(cov_from(DimSpec(2, 2, 2, 8), CMatrix::Identity(16, 16))).statistic == 0.0);

    CMatrix Q(2, 2);
    Q << 1.0, 0.5, 0.5, 1.0;
    const double stat = glrt_cyclo(cov_from(DimSpec(1, 1, 1, 2), Q)).statistic;
    CHECK_THAT(stat, WithinAbs(-std::log(0.75), 1e-14));
    CHECK_THAT(stat, WithinAbs(0.287682, 1e-6));
}

TEST_CASE("glrt_cyclo - dense oracle and fast path")
{
    std::mt19937_64 rng(6);
    for (auto [L, P, N, M] : {std::array<std::size_t, 4>{2, 2, 2, 64}, {1, 2, 4, 10}, {2, 2, 2, 16},
                              {1, 3, 2, 12}, {3, 1, 3, 9}}) {
        const DimSpec d(L, P, N, M);
        const auto batch = random_batch(rng, d, static_cast<Eigen::Index>(M));
        const auto Q = sample_covariance(batch);
        const double expect = oracle::dense_glr(Q.Q(), static_cast<Eigen::Index>(L),
                                                static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(P));
        CHECK_THAT(glrt_cyclo(Q).statistic, WithinAbs(expect, 1e-10));
        CHECK_THAT(glrt_cyclo(batch).statistic, WithinAbs(expect, 1e-10));
    }
}

TEST_CASE("glrt_cyclo - singular blocks")
{
    const DimSpec d(1, 2, 2, 4);
    CMatrix Q = CMatrix::Identity(8, 8);
    Q(5, 5) = 0.0; // reference half, second LP block
    try {
        glrt_cyclo(cov_from(d, Q));
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.block() == 0);
        CHECK(std::string(e.what()).find("Q_s") == std::string::npos);
    }
    Q = CMatrix::Identity(8, 8);
    Q(6, 6) = 0.0;
    try {
        glrt_cyclo(cov_from(d, Q));
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.block() == 1);
        CHECK(std::string(e.what()).find("Q_r") != std::string::npos);
    }
    CHECK(std::isfinite(glrt_cyclo(cov_from(d, Q), 1e-6).statistic));

    // Too few snapshots: a batch with fewer than 2LP columns is rank deficient.
    std::mt19937_64 rng(7);
    CHECK_THROWS_AS(glrt_cyclo(random_batch(rng, d, 2)), NotPositiveDefinite);
}

TEST_CASE("glrt_cyclo - non-negative on random Wishart sample covariances")
{
    std::mt19937_64 rng(8);
    const std::vector<DimSpec> dims{DimSpec(1, 1, 1, 2), DimSpec(1, 2, 4, 4), DimSpec(2, 2, 2, 8),
                                    DimSpec(2, 2, 8, 8), DimSpec(1, 4, 4, 8)};
    int count = 0;
    for (int rep = 0; rep < 250; ++rep)
        for (const auto& d : dims) {
            const auto M = static_cast<Eigen::Index>(d.M() + rng() % 8);
            CHECK(glrt_cyclo(random_batch(rng, d, M)).statistic >= -1e-8);
            ++count;
        }
    CHECK(count >= 1000);
}

TEST_CASE("glrt_cyclo - invariant to S_0-structured filtering")
{
    std::mt19937_64 rng(9);
    for (const auto& d : {DimSpec(2, 2, 2, 8), DimSpec(1, 2, 4, 4), DimSpec(2, 3, 2, 12)}) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto batch = random_batch(rng, d, static_cast<Eigen::Index>(d.M() + 4));
            const CMatrix G = random_s0_structured(rng, d);
            const SnapshotBatch filtered(d, G * batch.z());
            CHECK_THAT(glrt_cyclo(filtered).statistic, WithinAbs(glrt_cyclo(batch).statistic, 1e-8));
        }
    }
}

TEST_CASE("cross_correlation_stat")
{
    const DimSpec d(1, 2, 2, 4);
    SECTION("orthogonal halves")
    {
        CMatrix z = CMatrix::Zero(8, 4);
        z.block(0, 0, 4, 2).setRandom();
        z.block(4, 2, 4, 2).setRandom();
        CHECK(cross_correlation_stat(SnapshotBatch(d, z)).statistic == 0.0);
    }
    SECTION("perfectly coherent unit-power channels")
    {
        CMatrix Q = CMatrix::Identity(8, 8);
        Q.topRightCorner(4, 4) = CMatrix::Identity(4, 4);
        Q.bottomLeftCorner(4, 4) = CMatrix::Identity(4, 4);
        CHECK_THAT(cross_correlation_stat(cov_from(d, Q)).statistic, WithinAbs(4.0, 1e-14));
    }
    SECTION("brute force from raw outer products")
    {
        std::mt19937_64 rng(10);
        const DimSpec dd(2, 2, 3, 8);
        const auto batch = random_batch(rng, dd, 11);
        const Eigen::Index h = 12;
        CMatrix Qsr = CMatrix::Zero(h, h);
        double ts = 0.0, tr = 0.0;
        for (Eigen::Index m = 0; m < 11; ++m) {
            const CVector zs = batch.z().col(m).head(h);
            const CVector zr = batch.z().col(m).tail(h);
            Qsr += zs * zr.adjoint() / 11.0;
            ts += zs.squaredNorm() / 11.0;
            tr += zr.squaredNorm() / 11.0;
        }
        const double expect = Qsr.squaredNorm() / ((ts / h) * (tr / h));
        CHECK_THAT(cross_correlation_stat(batch).statistic, WithinRel(expect, 1e-12));
        CHECK_THAT(cross_correlation_stat(sample_covariance(batch)).statistic, WithinRel(expect, 1e-12));
    }
    SECTION("scale invariance per channel")
    {
        std::mt19937_64 rng(11);
        for (int rep = 0; rep < 50; ++rep) {
            const auto batch = random_batch(rng, d, 6);
            const double before = cross_correlation_stat(batch).statistic;
            const cdouble alpha = oracle::random_complex(rng, 1, 1)(0, 0) * 10.0;
            const cdouble beta = oracle::random_complex(rng, 1, 1)(0, 0) * 0.1;
            CMatrix z = batch.z();
            z.topRows(4) *= alpha;
            z.bottomRows(4) *= beta;
            CHECK_THAT(cross_correlation_stat(SnapshotBatch(d, z)).statistic, WithinRel(before, 1e-10));
        }
    }
    SECTION("zero power")
    {
        CHECK_THROWS_AS(cross_correlation_stat(SnapshotBatch(d, CMatrix::Zero(8, 4))), std::domain_error);
    }
}

TEST_CASE("glrt_cyclo - consistent at high SNR")
{
    ScenarioConfig cfg;
    cfg.snr_s_dB = cfg.snr_r_dB = 20.0;
    const std::array ids{DetectorId::glrt};
    auto h0 = scenario_statistics(cfg, Hypothesis::H0, 2000, 77, ids, 0).at(DetectorId::glrt);
    auto h1 = scenario_statistics(cfg, Hypothesis::H1, 100, 77, ids, 0).at(DetectorId::glrt);
    const double h0q = empirical_quantile(h0, 0.999);
    CHECK(empirical_quantile(h1, 0.5) > h0q);
}
