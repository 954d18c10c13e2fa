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

#include <span>
#include <vector>

namespace cyclodet {

/// Permutation stored as a gather map: out[k] = in[forward[k]].
///
/// Viewed as a matrix Pi with out = Pi * in, row k of Pi has its single one
/// in column forward[k]. The transpose (= inverse) scatters instead.
class PermutationMap {
public:
    PermutationMap() = default;

    explicit PermutationMap(std::vector<std::size_t> forward)
        : forward_(std::move(forward))
    {
        std::vector<bool> seen(forward_.size(), false);
        for (std::size_t src : forward_) {
            if (src >= forward_.size() || seen[src])
                throw DimensionError("PermutationMap: forward is not a bijection");
            seen[src] = true;
        }
    }

    static PermutationMap identity(std::size_t n)
    {
        std::vector<std::size_t> f(n);
        for (std::size_t k = 0; k < n; ++k)
            f[k] = k;
        return PermutationMap(std::move(f));
    }

    std::size_t size() const noexcept { return forward_.size(); }
    std::span<const std::size_t> forward() const noexcept { return forward_; }
    std::size_t operator[](std::size_t k) const { return forward_[k]; }

    /// The inverse map, which is also the matrix transpose.
    PermutationMap inverse() const
    {
        std::vector<std::size_t> inv(forward_.size());
        for (std::size_t k = 0; k < forward_.size(); ++k)
            inv[forward_[k]] = k;
        return PermutationMap(std::move(inv));
    }

    PermutationMap transpose() const { return inverse(); }

    /// Matrix product (*this) * rhs: applying rhs first, then *this.
    PermutationMap compose(const PermutationMap& rhs) const
    {
        if (rhs.size() != size())
            throw DimensionError("PermutationMap::compose: size mismatch");
        std::vector<std::size_t> f(size());
        for (std::size_t k = 0; k < size(); ++k)
            f[k] = rhs.forward_[forward_[k]];
        return PermutationMap(std::move(f));
    }

    template <typename Derived>
    auto apply(const Eigen::MatrixBase<Derived>& in) const
    {
        using Scalar = typename Derived::Scalar;
        if (static_cast<std::size_t>(in.size()) != size())
            throw DimensionError("PermutationMap::apply: length mismatch");
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(in.size());
        for (std::size_t k = 0; k < size(); ++k)
            out[static_cast<Eigen::Index>(k)] = in[static_cast<Eigen::Index>(forward_[k])];
        return out;
    }

    friend bool operator==(const PermutationMap&, const PermutationMap&) = default;

private:
    std::vector<std::size_t> forward_;
};

/// Commutation matrix L_{rows*cols, cols}: vec(A) = L * vec(A^T) for a
/// rows x cols matrix A, column-major vec.
inline PermutationMap commutation_permutation(std::size_t rows, std::size_t cols)
{
    if (rows == 0 || cols == 0)
        throw DimensionError("commutation_permutation: dimensions must be positive");
    std::vector<std::size_t> f(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            f[i + j * rows] = j + i * cols;
    return PermutationMap(std::move(f));
}

/// Realizes (Pi kron I_b): contiguous chunks of blockSize move as units.
inline PermutationMap expand_kron_identity(const PermutationMap& p, std::size_t blockSize)
{
    if (blockSize == 0)
        throw DimensionError("expand_kron_identity: blockSize must be positive");
    std::vector<std::size_t> f(p.size() * blockSize);
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t j = 0; j < blockSize; ++j)
            f[k * blockSize + j] = p[k] * blockSize + j;
    return PermutationMap(std::move(f));
}

/// (L_{2NP,NP} kron I_L): maps w = [y_s; y_r] to the sample-interleaved
/// ordering [u_s[0]; u_r[0]; u_s[1]; u_r[1]; ...]. Its transpose is T.
inline PermutationMap interleave_map(const DimSpec& dims)
{
    return expand_kron_identity(commutation_permutation(2, dims.NP()), dims.L());
}

} // namespace cyclodet
