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

#include "cyclodet/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <vector>

namespace cyclodet {

/// log det(B) of a Hermitian matrix through a Cholesky factorization.
/// Only the lower triangle of B is read. A non-negative `loading` adds
/// loading*I before factorizing.
template <typename Derived>
double hermitian_logdet(const Eigen::MatrixBase<Derived>& B, double loading = 0.0)
{
    if (B.rows() != B.cols())
        throw DimensionError("hermitian_logdet: matrix is not square");
    if (loading < 0.0)
        throw std::invalid_argument("hermitian_logdet: loading must be non-negative");

    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat A = B;
    if (loading > 0.0)
        A.diagonal().array() += Scalar(loading);

    Eigen::LLT<Mat, Eigen::Lower> llt(A);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("hermitian_logdet: matrix is not positive definite");

    const auto& Lmat = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < Lmat.rows(); ++i) {
        const double d = std::real(Lmat(i, i));
        if (!(d > 0.0) || !std::isfinite(d))
            throw NotPositiveDefinite("hermitian_logdet: non-positive pivot");
        acc += std::log(d);
    }
    return 2.0 * acc;
}

/// Block-diagonal covariance estimate: an ordered list of equally sized
/// square blocks standing for diag(B_0, B_1, ...).
struct BlockDiagEstimate {
    std::size_t blockSize = 0;
    std::vector<CMatrix> blocks;

    std::size_t totalDim() const noexcept { return blockSize * blocks.size(); }

    bool is_hermitian(double relTol = 1e-12) const
    {
        for (const auto& b : blocks) {
            const double scale = std::max(b.norm(), 1.0);
            if ((b - b.adjoint()).norm() > relTol * scale)
                return false;
        }
        return true;
    }

    /// Sum of block log-determinants. NotPositiveDefinite carries the index
    /// of the first failing block.
    double logdet(double loading = 0.0) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            try {
                acc += hermitian_logdet(blocks[k], loading);
            } catch (const NotPositiveDefinite&) {
                throw NotPositiveDefinite("block " + std::to_string(k) + " of size " +
                                              std::to_string(blockSize) +
                                              " is not positive definite",
                                          static_cast<std::ptrdiff_t>(k));
            }
        }
        return acc;
    }

    /// Dense diag(B_0, B_1, ...); for tests and small problems only.
    CMatrix dense() const
    {
        const auto n = static_cast<Eigen::Index>(totalDim());
        const auto b = static_cast<Eigen::Index>(blockSize);
        CMatrix out = CMatrix::Zero(n, n);
        for (std::size_t k = 0; k < blocks.size(); ++k)
            out.block(static_cast<Eigen::Index>(k) * b, static_cast<Eigen::Index>(k) * b, b, b) =
                blocks[k];
        return out;
    }
};

/// The diag_b(A) operator: the ordered diagonal blocks of size b.
template <typename Derived>
BlockDiagEstimate block_diag_extract(const Eigen::MatrixBase<Derived>& A, std::size_t blockSize)
{
    if (A.rows() != A.cols())
        throw DimensionError("block_diag_extract: matrix is not square");
    if (blockSize == 0 || static_cast<std::size_t>(A.rows()) % blockSize != 0)
        throw DimensionError("block_diag_extract: dimension " + std::to_string(A.rows()) +
                             " is not divisible by block size " + std::to_string(blockSize));

    BlockDiagEstimate est;
    est.blockSize = blockSize;
    const auto b = static_cast<Eigen::Index>(blockSize);
    const auto count = A.rows() / b;
    est.blocks.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index k = 0; k < count; ++k)
        est.blocks.emplace_back(A.block(k * b, k * b, b, b));
    return est;
}

} // namespace cyclodet
