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

// Synthetic passive-radar scenario: a multi-antenna QPSK illuminator with
// raised-cosine pulses, frequency-selective Rayleigh channels to a reference
// and a surveillance array, spatially and temporally colored Gaussian noise,
// and the windowing/stacking pipeline that turns raw samples into snapshots.

#pragma once

#include "cyclodet/rng.hpp"
#include "cyclodet/transforms.hpp"
#include "cyclodet/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace cyclodet {

enum class Hypothesis { H0, H1 };

inline const char* to_string(Hypothesis h) { return h == Hypothesis::H0 ? "H0" : "H1"; }

struct ScenarioConfig {
    std::size_t L = 2;                   // receive antennas per array
    std::size_t rho = 2;                 // transmit antennas
    std::size_t sps = 2;                 // samples per symbol; cycle period P
    std::size_t N = 32;                  // cycle-blocks per window
    std::size_t M = 16;                  // windows
    double snr_s_dB = -10.0;
    double snr_r_dB = 0.0;
    std::size_t channelSpanSymbols = 10; // delay spread in symbol durations
    std::size_t maOrder = 20;            // noise moving-average order
    double spatialCorr = 0.5;            // exponential inter-antenna profile
    double rcRolloff = 1.0;
    std::size_t rcSpanSymbols = 8;
    std::uint64_t seed = 0;

    std::size_t P() const noexcept { return sps; }
    std::size_t channelTaps() const noexcept { return channelSpanSymbols * sps; }
    std::size_t pulseTaps() const noexcept { return rcSpanSymbols * sps + 1; }
    /// Samples discarded before the first window.
    std::size_t transient() const noexcept { return channelTaps() + rcSpanSymbols * sps; }
    /// Retained samples per channel, M*N*P.
    std::size_t observationLength() const noexcept { return M * N * sps; }

    DimSpec dims() const { return DimSpec(L, sps, N, M); }

    /// Throws ConfigError naming the first violated constraint.
    void validate() const
    {
        auto fail = [](const std::string& msg) { throw ConfigError(msg); };
        if (L == 0) fail("L must be positive");
        if (rho == 0) fail("rho must be positive");
        if (sps == 0) fail("sps must be positive");
        if (N == 0) fail("N must be positive");
        if (M == 0) fail("M must be positive");
        if (channelSpanSymbols == 0) fail("channelSpanSymbols must be positive");
        if (rho < L)
            fail("rho >= L required (rho = " + std::to_string(rho) +
                 ", L = " + std::to_string(L) + ")");
        if (M < 2 * L * sps)
            fail("M >= 2*L*P required (M = " + std::to_string(M) +
                 ", 2*L*P = " + std::to_string(2 * L * sps) + ")");
        if (!(spatialCorr >= 0.0 && spatialCorr < 1.0))
            fail("spatialCorr must lie in [0, 1)");
        if (!(rcRolloff >= 0.0 && rcRolloff <= 1.0))
            fail("rcRolloff must lie in [0, 1]");
        if (!std::isfinite(snr_s_dB)) fail("snr_s_dB must be finite");
        if (!std::isfinite(snr_r_dB)) fail("snr_r_dB must be finite");
    }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// One frequency-selective MIMO channel: taps[k] is the L x rho matrix at delay k.
struct ChannelRealization {
    std::vector<CMatrix> taps;
};

/// Raw received streams, L x (M*N*P) each.
struct ObservationPair {
    CMatrix u_s;
    CMatrix u_r;
    Hypothesis hypothesis = Hypothesis::H0;
};

/// The M transformed snapshots z_m, stored as the columns of a
/// 2LNP x M matrix.
class SnapshotBatch {
public:
    SnapshotBatch(DimSpec dims, CMatrix z) : dims_(dims), z_(std::move(z))
    {
        if (static_cast<std::size_t>(z_.rows()) != dims_.vecLen())
            throw DimensionError("SnapshotBatch: snapshot length " + std::to_string(z_.rows()) +
                                 " != 2LNP = " + std::to_string(dims_.vecLen()));
        if (z_.cols() == 0)
            throw DimensionError("SnapshotBatch: empty batch");
    }

    const DimSpec& dims() const noexcept { return dims_; }
    const CMatrix& z() const noexcept { return z_; }
    CMatrix& z() noexcept { return z_; }
    std::size_t count() const noexcept { return static_cast<std::size_t>(z_.cols()); }

    auto surveillance() const { return z_.topRows(static_cast<Eigen::Index>(dims_.halfLen())); }
    auto reference() const { return z_.bottomRows(static_cast<Eigen::Index>(dims_.halfLen())); }

private:
    DimSpec dims_;
    CMatrix z_;
};

// ------------------------------------------------------------------------
// Illuminator signal
// ------------------------------------------------------------------------

/// Unit-energy QPSK symbols (+-1 +-j)/sqrt(2).
inline CVector qpsk_symbols(std::size_t count, Rng& rng)
{
    std::uniform_int_distribution<int> bit(0, 1);
    const double a = 1.0 / std::numbers::sqrt2;
    CVector out(static_cast<Eigen::Index>(count));
    for (auto& s : out) {
        const double re = bit(rng) ? a : -a;
        const double im = bit(rng) ? a : -a;
        s = {re, im};
    }
    return out;
}

/// Truncated raised-cosine pulse, span*sps + 1 taps, unit energy.
inline std::vector<double> raised_cosine_taps(double rolloff, std::size_t sps, std::size_t span)
{
    const std::size_t n = span * sps + 1;
    const double center = static_cast<double>(span * sps) / 2.0;
    std::vector<double> h(n);
    auto sinc = [](double x) {
        return std::abs(x) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    };
    double energy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = (static_cast<double>(k) - center) / static_cast<double>(sps);
        const double denom = 1.0 - 4.0 * rolloff * rolloff * t * t;
        double v;
        if (rolloff > 0.0 && std::abs(denom) < 1e-10)
            v = std::numbers::pi / 4.0 * sinc(1.0 / (2.0 * rolloff));
        else
            v = sinc(t) * std::cos(std::numbers::pi * rolloff * t) / denom;
        h[k] = v;
        energy += v * v;
    }
    const double norm = 1.0 / std::sqrt(energy);
    for (auto& v : h)
        v *= norm;
    return h;
}

/// rho x length pulse-shaped QPSK streams, independent across antennas.
/// Output sample n is the full convolution of the upsampled symbols with the
/// pulse at index n, so the first span*sps samples contain the filter
/// start-up transient.
inline CMatrix gen_cs_source(const ScenarioConfig& cfg, std::size_t length, Rng& rng)
{
    if (length < cfg.rcSpanSymbols * cfg.sps)
        throw DimensionError("gen_cs_source: length shorter than the pulse span");
    const auto h = raised_cosine_taps(cfg.rcRolloff, cfg.sps, cfg.rcSpanSymbols);
    const std::size_t sps = cfg.sps;
    const std::size_t nsym = length / sps + 1;

    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(cfg.rho), static_cast<Eigen::Index>(length));
    for (std::size_t t = 0; t < cfg.rho; ++t) {
        const CVector sym = qpsk_symbols(nsym, rng);
        for (std::size_t n = 0; n < length; ++n) {
            // y[n] = sum_s sym[s] h[n - s*sps], 0 <= n - s*sps < |h|
            cdouble acc{0.0, 0.0};
            const std::size_t sHi = n / sps;
            for (std::size_t s = sHi + 1; s-- > 0;) {
                const std::size_t k = n - s * sps;
                if (k >= h.size())
                    break;
                acc += sym[static_cast<Eigen::Index>(s)] * h[k];
            }
            out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n)) = acc;
        }
    }
    return out;
}

// ------------------------------------------------------------------------
// Channels and noise
// ------------------------------------------------------------------------

/// Rayleigh MIMO channel with a flat power-delay profile over
/// channelSpanSymbols*sps taps. Entries are CN(0, 1/taps), so the expected
/// energy summed over taps is 1 for every (receive, transmit) pair.
inline ChannelRealization gen_channel(const ScenarioConfig& cfg, Rng& rng)
{
    const std::size_t ntaps = cfg.channelTaps();
    const double var = 1.0 / static_cast<double>(ntaps);
    ChannelRealization ch;
    ch.taps.reserve(ntaps);
    for (std::size_t k = 0; k < ntaps; ++k)
        ch.taps.push_back(complex_normal_matrix(rng, static_cast<Eigen::Index>(cfg.L),
                                                static_cast<Eigen::Index>(cfg.rho), var));
    return ch;
}

/// Symmetric square root of the exponential correlation matrix
/// [S]_ij = c^|i-j|.
inline Eigen::MatrixXd spatial_mixing_matrix(std::size_t L, double c)
{
    Eigen::MatrixXd S(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    for (Eigen::Index i = 0; i < S.rows(); ++i)
        for (Eigen::Index j = 0; j < S.cols(); ++j)
            S(i, j) = std::pow(c, static_cast<double>(std::abs(i - j)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    return es.operatorSqrt();
}

/// L x length colored noise with unit expected power per antenna.
///
/// One random unit-energy MA(maOrder) filter is drawn per call and applied to
/// every antenna; the streams are then mixed by the symmetric square root of
/// the exponential spatial correlation matrix.
inline CMatrix gen_colored_noise(const ScenarioConfig& cfg, std::size_t length, Rng& rng)
{
    const std::size_t q = cfg.maOrder;
    if (length <= q)
        throw DimensionError("gen_colored_noise: length must exceed the MA order");
    const auto L = static_cast<Eigen::Index>(cfg.L);

    CVector filt = complex_normal_matrix(rng, static_cast<Eigen::Index>(q + 1), 1);
    filt /= filt.norm();

    const CMatrix innov = complex_normal_matrix(rng, L, static_cast<Eigen::Index>(length + q));
    CMatrix colored(L, static_cast<Eigen::Index>(length));
    for (std::size_t n = 0; n < length; ++n) {
        auto col = colored.col(static_cast<Eigen::Index>(n));
        col.setZero();
        for (std::size_t k = 0; k <= q; ++k)
            col += filt[static_cast<Eigen::Index>(k)] *
                   innov.col(static_cast<Eigen::Index>(n + q - k));
    }
    if (cfg.L == 1 || cfg.spatialCorr == 0.0)
        return colored;
    const CMatrix mix = spatial_mixing_matrix(cfg.L, cfg.spatialCorr).cast<cdouble>();
    return mix * colored;
}

/// y[:, n] = sum_k H[k] s[:, first + n - k] for n in [0, count).
inline CMatrix apply_channel(const ChannelRealization& ch, const CMatrix& src,
                             std::size_t first, std::size_t count)
{
    if (ch.taps.empty())
        throw DimensionError("apply_channel: empty channel");
    if (first + 1 < ch.taps.size() || first + count > static_cast<std::size_t>(src.cols()))
        throw DimensionError("apply_channel: window outside the source");
    CMatrix out = CMatrix::Zero(ch.taps.front().rows(), static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < ch.taps.size(); ++k)
        out.noalias() += ch.taps[k] * src.middleCols(static_cast<Eigen::Index>(first - k),
                                                     static_cast<Eigen::Index>(count));
    return out;
}

// ------------------------------------------------------------------------
// Observations
// ------------------------------------------------------------------------

/// RNG substream ids within one trial.
enum class Stream : std::uint64_t { source = 0, channel_s = 1, channel_r = 2, noise_s = 3, noise_r = 4 };

/// Signal and (already SNR-scaled) noise parts of both arrays, before summation.
struct ObservationComponents {
    CMatrix signal_s, signal_r;
    CMatrix noise_s, noise_r;
};

inline double db_to_linear(double dB) { return std::pow(10.0, dB / 10.0); }

/// Average per-antenna power of an L x n sample matrix.
inline double mean_power(const CMatrix& x)
{
    return x.squaredNorm() / static_cast<double>(x.size());
}

inline ObservationComponents synth_components(const ScenarioConfig& cfg, const StreamSeeder& seeder)
{
    cfg.validate();
    const std::size_t len = cfg.observationLength();
    const std::size_t skip = cfg.transient();

    Rng rngSrc = seeder.stream(static_cast<std::uint64_t>(Stream::source));
    Rng rngHs = seeder.stream(static_cast<std::uint64_t>(Stream::channel_s));
    Rng rngHr = seeder.stream(static_cast<std::uint64_t>(Stream::channel_r));
    Rng rngVs = seeder.stream(static_cast<std::uint64_t>(Stream::noise_s));
    Rng rngVr = seeder.stream(static_cast<std::uint64_t>(Stream::noise_r));

    const CMatrix src = gen_cs_source(cfg, skip + len, rngSrc);
    const ChannelRealization Hs = gen_channel(cfg, rngHs);
    const ChannelRealization Hr = gen_channel(cfg, rngHr);

    ObservationComponents c;
    c.signal_s = apply_channel(Hs, src, skip, len);
    c.signal_r = apply_channel(Hr, src, skip, len);
    c.noise_s = gen_colored_noise(cfg, len, rngVs);
    c.noise_r = gen_colored_noise(cfg, len, rngVr);

    // SNR = time-averaged per-antenna signal power / per-antenna noise power.
    c.noise_s *= std::sqrt(mean_power(c.signal_s) / db_to_linear(cfg.snr_s_dB));
    c.noise_r *= std::sqrt(mean_power(c.signal_r) / db_to_linear(cfg.snr_r_dB));
    return c;
}

/// One trial of the two-channel model. Under H0 the surveillance array sees
/// noise only; its noise level is still set from the echo it would receive.
inline ObservationPair synth_observation(const ScenarioConfig& cfg, Hypothesis hyp,
                                         const StreamSeeder& seeder)
{
    ObservationComponents c = synth_components(cfg, seeder);
    ObservationPair obs;
    obs.hypothesis = hyp;
    obs.u_r = c.signal_r + c.noise_r;
    obs.u_s = hyp == Hypothesis::H1 ? CMatrix(c.signal_s + c.noise_s) : std::move(c.noise_s);
    return obs;
}

/// Cuts the streams into M windows of N*P samples and maps each window
/// w = [y_s; y_r] to z = [dft_reorder(y_s); dft_reorder(y_r)].
inline SnapshotBatch stack_snapshots(const ObservationPair& obs, const DimSpec& dims)
{
    const auto L = static_cast<Eigen::Index>(dims.L());
    const auto NP = static_cast<Eigen::Index>(dims.NP());
    const auto M = static_cast<Eigen::Index>(dims.M());
    const auto half = static_cast<Eigen::Index>(dims.halfLen());
    for (const CMatrix* u : {&obs.u_s, &obs.u_r})
        if (u->rows() != L || u->cols() != NP * M)
            throw DimensionError("stack_snapshots: streams must be L x (M*N*P) = " +
                                 std::to_string(L) + " x " + std::to_string(NP * M));

    CMatrix z(2 * half, M);
    for (Eigen::Index m = 0; m < M; ++m) {
        // Column-major L x NP block reshaped: sample n, antenna a at n*L + a.
        const CMatrix ws = obs.u_s.middleCols(m * NP, NP);
        const CMatrix wr = obs.u_r.middleCols(m * NP, NP);
        z.col(m).head(half) = dft_reorder_transform(ws.reshaped(), dims);
        z.col(m).tail(half) = dft_reorder_transform(wr.reshaped(), dims);
    }
    return SnapshotBatch(dims, std::move(z));
}

/// Snapshots drawn directly as i.i.d. standard circular Gaussian vectors.
inline SnapshotBatch white_null_batch(const DimSpec& dims, Rng& rng)
{
    return SnapshotBatch(dims, complex_normal_matrix(rng, static_cast<Eigen::Index>(dims.vecLen()),
                                                     static_cast<Eigen::Index>(dims.M())));
}

} // namespace cyclodet
