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

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace cyclodet {

using Rng = std::mt19937_64;

/// Deterministic RNG substreams keyed by (master seed, tags..., stream id).
///
/// Every trial derives its generators from its own key, so results do not
/// depend on which worker runs the trial or in which order.
class StreamSeeder {
public:
    explicit StreamSeeder(std::uint64_t master, std::initializer_list<std::uint64_t> tags = {})
        : master_(master), tags_(tags) {}

    StreamSeeder child(std::uint64_t tag) const
    {
        StreamSeeder s = *this;
        s.tags_.push_back(tag);
        return s;
    }

    Rng stream(std::uint64_t id) const
    {
        std::vector<std::uint32_t> words;
        words.reserve(2 * (tags_.size() + 2));
        auto push = [&](std::uint64_t x) {
            words.push_back(static_cast<std::uint32_t>(x));
            words.push_back(static_cast<std::uint32_t>(x >> 32));
        };
        push(master_);
        for (auto t : tags_)
            push(t);
        push(id);
        std::seed_seq seq(words.begin(), words.end());
        return Rng(seq);
    }

    std::uint64_t master() const noexcept { return master_; }

private:
    std::uint64_t master_;
    std::vector<std::uint64_t> tags_;
};

/// Circularly symmetric complex Gaussian with E|x|^2 = variance.
inline cdouble complex_normal(Rng& rng, double variance = 1.0)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

inline CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                     double variance = 1.0)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = nd(rng);
            const double im = nd(rng);
            out(i, j) = {re, im};
        }
    return out;
}

} // namespace cyclodet
