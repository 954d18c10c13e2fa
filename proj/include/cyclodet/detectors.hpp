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

#pragma once

#include "cyclodet/linalg.hpp"
#include "cyclodet/permutation.hpp"
#include "cyclodet/scenario.hpp"
#include "cyclodet/types.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace cyclodet {

enum class DetectorId { glrt, xcorr };

inline constexpr std::array<DetectorId, 2> all_detectors{DetectorId::glrt, DetectorId::xcorr};

inline const char* to_string(DetectorId id)
{
    return id == DetectorId::glrt ? "glrt" : "xcorr";
}

inline std::optional<DetectorId> parse_detector(std::string_view name)
{
    if (name == "glrt") return DetectorId::glrt;
    if (name == "xcorr") return DetectorId::xcorr;
    return std::nullopt;
}

struct DetectorOutput {
    double statistic = 0.0;
    DetectorId detector = DetectorId::glrt;
};

/// Sample covariance Q = (1/M) sum_m z_m z_m^H of a snapshot batch.
///
/// Views: Q_s is the north-west and Q_r the south-east L*N*P block; Q_sr is
/// the north-east cross block. The permuted matrix T^T Q T is never formed;
/// its diagonal blocks are gathered through the interleave map.
class SampleCovariance {
public:
    SampleCovariance(DimSpec dims, CMatrix Q) : dims_(dims), Q_(std::move(Q))
    {
        const auto n = static_cast<Eigen::Index>(dims_.vecLen());
        if (Q_.rows() != n || Q_.cols() != n)
            throw DimensionError("SampleCovariance: Q must be 2LNP x 2LNP");
    }

    const DimSpec& dims() const noexcept { return dims_; }
    const CMatrix& Q() const noexcept { return Q_; }

    auto Qs() const { return Q_.topLeftCorner(half(), half()); }
    auto Qr() const { return Q_.bottomRightCorner(half(), half()); }
    auto Qsr() const { return Q_.topRightCorner(half(), half()); }

    /// l-th diagonal block of size 2LP of T^T Q T.
    CMatrix permuted_block(std::size_t l) const
    {
        const std::size_t b = 2 * dims_.groupLen();
        if (l >= dims_.N())
            throw DimensionError("SampleCovariance::permuted_block: index out of range");
        const PermutationMap f = interleave_map(dims_);
        CMatrix out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b));
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < b; ++j)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    Q_(static_cast<Eigen::Index>(f[l * b + i]), static_cast<Eigen::Index>(f[l * b + j]));
        return out;
    }

private:
    Eigen::Index half() const { return static_cast<Eigen::Index>(dims_.halfLen()); }

    DimSpec dims_;
    CMatrix Q_;
};

inline SampleCovariance sample_covariance(const SnapshotBatch& batch)
{
    const CMatrix& Z = batch.z();
    CMatrix Q = Z * Z.adjoint() / static_cast<double>(Z.cols());
    Q = (0.5 * (Q + Q.adjoint())).eval();
    return SampleCovariance(batch.dims(), std::move(Q));
}

/// ML estimate under H0: (diag_L(Q_s), diag_LP(Q_r)).
inline std::pair<BlockDiagEstimate, BlockDiagEstimate> mle_h0(const SampleCovariance& Q)
{
    return {block_diag_extract(Q.Qs(), Q.dims().L()),
            block_diag_extract(Q.Qr(), Q.dims().groupLen())};
}

/// ML estimate under H1 in permuted coordinates: diag_2LP(T^T Q T).
inline BlockDiagEstimate mle_h1(const SampleCovariance& Q)
{
    BlockDiagEstimate est;
    est.blockSize = 2 * Q.dims().groupLen();
    est.blocks.reserve(Q.dims().N());
    for (std::size_t l = 0; l < Q.dims().N(); ++l)
        est.blocks.push_back(Q.permuted_block(l));
    return est;
}

namespace detail {

inline double tagged_logdet(const BlockDiagEstimate& est, const char* which, double loading)
{
    try {
        return est.logdet(loading);
    } catch (const NotPositiveDefinite& e) {
        throw NotPositiveDefinite(std::string(which) + ": " + e.what(), e.block());
    }
}

} // namespace detail

/// log of the GLR Lambda^{1/M} = det(S0_hat) / det(S1_hat), evaluated
/// block-wise in the log domain. T is a permutation, so det(T)^2 = 1 and
/// det(S1_hat) is the product of the 2LP-block determinants of T^T Q T.
inline DetectorOutput glrt_cyclo(const SampleCovariance& Q, double loading = 0.0)
{
    const auto [s0s, s0r] = mle_h0(Q);
    const BlockDiagEstimate s1 = mle_h1(Q);
    const double stat = detail::tagged_logdet(s0s, "Q_s", loading) +
                        detail::tagged_logdet(s0r, "Q_r", loading) -
                        detail::tagged_logdet(s1, "Q_tilde", loading);
    return {stat, DetectorId::glrt};
}

/// Same statistic straight from the snapshots, touching only the N
/// 2LP x 2LP group covariances instead of the full 2LNP x 2LNP matrix.
///
/// Group l collects surveillance rows [l*LP, (l+1)*LP) and the matching
/// reference rows. Stacking them (rather than interleaving as T does) is a
/// symmetric row/column permutation and leaves every determinant unchanged.
inline DetectorOutput glrt_cyclo(const SnapshotBatch& batch, double loading = 0.0)
{
    const DimSpec& d = batch.dims();
    const auto L = static_cast<Eigen::Index>(d.L());
    const auto LP = static_cast<Eigen::Index>(d.groupLen());
    const auto P = static_cast<Eigen::Index>(d.P());
    const auto M = batch.z().cols();
    const auto half = static_cast<Eigen::Index>(d.halfLen());

    CMatrix Zl(2 * LP, M);
    double s0 = 0.0, s1 = 0.0;
    for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(d.N()); ++l) {
        Zl.topRows(LP) = batch.z().middleRows(l * LP, LP);
        Zl.bottomRows(LP) = batch.z().middleRows(half + l * LP, LP);
        CMatrix C = Zl * Zl.adjoint() / static_cast<double>(M);
        C = (0.5 * (C + C.adjoint())).eval();
        try {
            for (Eigen::Index p = 0; p < P; ++p)
                s0 += hermitian_logdet(C.block(p * L, p * L, L, L), loading);
        } catch (const NotPositiveDefinite&) {
            throw NotPositiveDefinite("Q_s: group " + std::to_string(l) + " is not positive definite", l);
        }
        try {
            s0 += hermitian_logdet(C.bottomRightCorner(LP, LP), loading);
        } catch (const NotPositiveDefinite&) {
            throw NotPositiveDefinite("Q_r: block " + std::to_string(l) + " is not positive definite", l);
        }
        try {
            s1 += hermitian_logdet(C, loading);
        } catch (const NotPositiveDefinite&) {
            throw NotPositiveDefinite("Q_tilde: block " + std::to_string(l) + " is not positive definite", l);
        }
    }
    return {s0 - s1, DetectorId::glrt};
}

namespace detail {

inline double normalized_xcorr(double crossEnergy, double traceS, double traceR, std::size_t n)
{
    const double ps = traceS / static_cast<double>(n);
    const double pr = traceR / static_cast<double>(n);
    if (!(ps > 0.0) || !(pr > 0.0) || !std::isfinite(ps * pr) || ps * pr == 0.0)
        throw std::domain_error("cross_correlation_stat: zero-power input");
    return crossEnergy / (ps * pr);
}

} // namespace detail

/// T_cc = ||Q_sr||_F^2 / ((tr Q_s / LNP) (tr Q_r / LNP)).
inline DetectorOutput cross_correlation_stat(const SampleCovariance& Q)
{
    const double v = detail::normalized_xcorr(Q.Qsr().squaredNorm(), std::real(Q.Qs().trace()),
                                              std::real(Q.Qr().trace()), Q.dims().halfLen());
    return {v, DetectorId::xcorr};
}

/// Snapshot form via M x M Gram matrices:
///   ||Q_sr||_F^2 = (1/M^2) sum_{m,m'} G_r(m,m') conj(G_s(m,m')).
inline DetectorOutput cross_correlation_stat(const SnapshotBatch& batch)
{
    const auto Zs = batch.surveillance();
    const auto Zr = batch.reference();
    const CMatrix Gs = Zs.adjoint() * Zs;
    const CMatrix Gr = Zr.adjoint() * Zr;
    const double M = static_cast<double>(batch.z().cols());
    const double cross = (Gr.array() * Gs.array().conjugate()).sum().real() / (M * M);
    const double v = detail::normalized_xcorr(cross, Gs.trace().real() / M, Gr.trace().real() / M,
                                              batch.dims().halfLen());
    return {v, DetectorId::xcorr};
}

inline DetectorOutput evaluate(DetectorId id, const SnapshotBatch& batch, double loading = 0.0)
{
    return id == DetectorId::glrt ? glrt_cyclo(batch, loading) : cross_correlation_stat(batch);
}

} // namespace cyclodet
