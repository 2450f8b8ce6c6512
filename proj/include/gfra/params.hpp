// SPDX-License-Identifier: Apache-2.0
//
// gfra - success probability of grant-free random access with massive MIMO
// Copyright (C) 2026 The gfra authors
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

#ifndef GFRA_PARAMS_HPP
#define GFRA_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gfra
{

enum class BeamformerKind
{
    CB,
    ZF
};

inline std::string_view to_string(BeamformerKind kind)
{
    return kind == BeamformerKind::CB ? "cb" : "zf";
}

inline BeamformerKind parse_beamformer(std::string_view s)
{
    if (s == "cb" || s == "CB")
        return BeamformerKind::CB;
    if (s == "zf" || s == "ZF")
        return BeamformerKind::ZF;
    throw std::invalid_argument("unknown beamformer '" + std::string(s) + "' (expected cb or zf)");
}

/// Scalar system parameters of one random-access slot. The SINR threshold and
/// the uplink SNR are linear quantities; noise power is normalized to 1, so
/// uplink_snr is also the per-antenna expected receive power.
struct SystemParams
{
    int antennas = 1;           // M
    int active_ues = 1;         // N_a
    int channels = 1;           // C
    int preambles = 1;          // P
    double sinr_threshold = 1.; // gamma_Th
    double uplink_snr = 1.;     // rho_R

    double load() const noexcept { return static_cast<double>(active_ues) / channels; }

    bool integer_load() const noexcept { return active_ues % channels == 0; }

    void validate() const
    {
        if (antennas < 1)
            throw std::invalid_argument("antennas must be >= 1");
        if (active_ues < 1)
            throw std::invalid_argument("active UEs must be >= 1");
        if (channels < 1)
            throw std::invalid_argument("channels must be >= 1");
        if (preambles < 1)
            throw std::invalid_argument("preambles must be >= 1");
        if (!(sinr_threshold > 0.0) || !std::isfinite(sinr_threshold))
            throw std::invalid_argument("SINR threshold must be positive");
        if (!(uplink_snr > 0.0) || !std::isfinite(uplink_snr))
            throw std::invalid_argument("uplink SNR must be positive");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace gfra

#endif
