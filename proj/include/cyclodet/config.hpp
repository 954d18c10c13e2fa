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

#include "cyclodet/scenario.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace cyclodet {

/// Bumped whenever CSV columns or JSON keys of any artifact change.
inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string line_col(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::size_t read_count(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number_unsigned())
        throw ConfigError("field '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

inline double read_real(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number())
        throw ConfigError("field '" + key + "' must be a number");
    return v.get<double>();
}

} // namespace detail

/// Parses a JSON scenario document. Absent fields keep their defaults
/// (L = rho = 2, P = 2, N = 32, M = 16, ...); unknown fields are errors.
inline ScenarioConfig parse_config(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("parse error at " + detail::line_col(text, e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    ScenarioConfig cfg;
    for (const auto& [key, v] : doc.items()) {
        if (key == "L") cfg.L = detail::read_count(v, key);
        else if (key == "rho") cfg.rho = detail::read_count(v, key);
        else if (key == "sps") cfg.sps = detail::read_count(v, key);
        else if (key == "N") cfg.N = detail::read_count(v, key);
        else if (key == "M") cfg.M = detail::read_count(v, key);
        else if (key == "snr_s_dB") cfg.snr_s_dB = detail::read_real(v, key);
        else if (key == "snr_r_dB") cfg.snr_r_dB = detail::read_real(v, key);
        else if (key == "channelSpanSymbols") cfg.channelSpanSymbols = detail::read_count(v, key);
        else if (key == "maOrder") cfg.maOrder = detail::read_count(v, key);
        else if (key == "spatialCorr") cfg.spatialCorr = detail::read_real(v, key);
        else if (key == "rcRolloff") cfg.rcRolloff = detail::read_real(v, key);
        else if (key == "rcSpanSymbols") cfg.rcSpanSymbols = detail::read_count(v, key);
        else if (key == "seed") {
            if (!v.is_number_unsigned())
                throw ConfigError("field 'seed' must be a non-negative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else
            throw ConfigError("unknown field '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

inline nlohmann::json to_json(const ScenarioConfig& cfg)
{
    return nlohmann::json{
        {"L", cfg.L},
        {"rho", cfg.rho},
        {"sps", cfg.sps},
        {"N", cfg.N},
        {"M", cfg.M},
        {"snr_s_dB", cfg.snr_s_dB},
        {"snr_r_dB", cfg.snr_r_dB},
        {"channelSpanSymbols", cfg.channelSpanSymbols},
        {"maOrder", cfg.maOrder},
        {"spatialCorr", cfg.spatialCorr},
        {"rcRolloff", cfg.rcRolloff},
        {"rcSpanSymbols", cfg.rcSpanSymbols},
        {"seed", cfg.seed},
    };
}

inline std::string serialize_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2); }

} // namespace cyclodet
