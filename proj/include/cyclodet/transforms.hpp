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

#include "cyclodet/permutation.hpp"
#include "cyclodet/types.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <vector>

namespace cyclodet {

namespace detail {

inline Eigen::FFT<double>& thread_fft()
{
    // kissfft caches twiddles per length; not safe to share across threads.
    thread_local Eigen::FFT<double> fft;
    return fft;
}

} // namespace detail

/// Frequency-domain coordinates of one channel half:
///   (L_{NP,N} kron I_L) (F_NP kron I_L)^H v.
///
/// `v` holds NP time samples of L-vectors (sample n, antenna a at n*L + a).
/// Each antenna stream gets a unitary inverse DFT of length NP; the bins are
/// then regrouped so output group j (of N, each L*P long) holds bins
/// j, j+N, ..., j+(P-1)N in that order.
inline CVector dft_reorder_transform(const Eigen::Ref<const CVector>& v,
                                     std::size_t L, std::size_t N, std::size_t P)
{
    const std::size_t NP = N * P;
    if (L == 0 || N == 0 || P == 0)
        throw DimensionError("dft_reorder_transform: L, N and P must be positive");
    if (static_cast<std::size_t>(v.size()) != L * NP)
        throw DimensionError("dft_reorder_transform: expected length " +
                             std::to_string(L * NP) + ", got " + std::to_string(v.size()));

    auto& fft = detail::thread_fft();
    const double scale = std::sqrt(static_cast<double>(NP));
    std::vector<cdouble> stream(NP), bins(NP);
    CVector out(v.size());

    for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t n = 0; n < NP; ++n)
            stream[n] = v[static_cast<Eigen::Index>(n * L + a)];
        // Eigen's inverse carries 1/NP; rescale to 1/sqrt(NP).
        // kissfft does not handle length 1.
        if (NP == 1)
            bins = stream;
        else
            fft.inv(bins, stream);
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t j = 0; j < N; ++j)
                out[static_cast<Eigen::Index>((i + P * j) * L + a)] = bins[j + i * N] * scale;
    }
    return out;
}

inline CVector dft_reorder_transform(const Eigen::Ref<const CVector>& v, const DimSpec& dims)
{
    return dft_reorder_transform(v, dims.L(), dims.N(), dims.P());
}

/// Block-circulant matrix with the given first block row: block (i, j) is
/// firstBlockRow[(j - i) mod n].
inline CMatrix build_block_circulant(const std::vector<CMatrix>& firstBlockRow)
{
    if (firstBlockRow.empty())
        throw DimensionError("build_block_circulant: no blocks");
    const Eigen::Index b = firstBlockRow.front().rows();
    for (const auto& blk : firstBlockRow)
        if (blk.rows() != b || blk.cols() != b)
            throw DimensionError("build_block_circulant: blocks must be square and equally sized");

    const auto n = static_cast<Eigen::Index>(firstBlockRow.size());
    CMatrix out(n * b, n * b);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.block(i * b, j * b, b, b) =
                firstBlockRow[static_cast<std::size_t>(((j - i) % n + n) % n)];
    return out;
}

} // namespace cyclodet
