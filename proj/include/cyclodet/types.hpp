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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclodet {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// ------------------------------------------------------------------------
// Errors
// ------------------------------------------------------------------------

/// Raised when operand sizes do not agree with the declared dimensions.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cholesky factorization of a covariance block failed.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(const std::string& what, std::ptrdiff_t block = -1)
        : std::runtime_error(what), block_(block) {}

    /// Index of the offending diagonal block, or -1 when not applicable.
    std::ptrdiff_t block() const noexcept { return block_; }

private:
    std::ptrdiff_t block_;
};

/// Too few Monte Carlo trials to resolve the requested false-alarm rate.
class InsufficientTrials : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid scenario or configuration document.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ------------------------------------------------------------------------
// Dimensions
// ------------------------------------------------------------------------

/// Problem dimensions: L antennas per array, cycle period P, N cycle-blocks
/// per window and M windows. One snapshot z has 2*L*N*P entries.
class DimSpec {
public:
    DimSpec(std::size_t L, std::size_t P, std::size_t N, std::size_t M)
        : L_(L), P_(P), N_(N), M_(M)
    {
        if (L == 0 || P == 0 || N == 0)
            throw DimensionError("DimSpec: L, P and N must be positive");
        if (M < 2 * L * P)
            throw DimensionError("DimSpec: M = " + std::to_string(M) +
                                 " must be at least 2*L*P = " +
                                 std::to_string(2 * L * P));
    }

    std::size_t L() const noexcept { return L_; }
    std::size_t P() const noexcept { return P_; }
    std::size_t N() const noexcept { return N_; }
    std::size_t M() const noexcept { return M_; }

    std::size_t NP() const noexcept { return N_ * P_; }
    /// Length of one channel half, L*N*P.
    std::size_t halfLen() const noexcept { return L_ * N_ * P_; }
    /// Length of a full snapshot, 2*L*N*P.
    std::size_t vecLen() const noexcept { return 2 * halfLen(); }
    /// Size of a reference-channel block, L*P.
    std::size_t groupLen() const noexcept { return L_ * P_; }

    friend bool operator==(const DimSpec&, const DimSpec&) = default;

private:
    std::size_t L_, P_, N_, M_;
};

} // namespace cyclodet
