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

#ifndef GFRA_CLI_SWEEP_HPP
#define GFRA_CLI_SWEEP_HPP

#include "../mcsim/access.hpp"
#include "../mcsim/channel.hpp"
#include "../params.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gfra::cli
{

/// Thrown for invalid command-line or config-file input (exit code 2).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation regime of one curve. EudLimit is analytic only.
enum class Mode
{
    Random,
    Eud,
    InfiniteP,
    EudLimit,
    SingleAntenna
};

inline std::string_view to_string(Mode mode)
{
    switch (mode)
    {
    case Mode::Random:
        return "random";
    case Mode::Eud:
        return "eud";
    case Mode::InfiniteP:
        return "infinite_p";
    case Mode::EudLimit:
        return "eud_limit";
    case Mode::SingleAntenna:
        return "single_antenna";
    }
    return "?";
}

inline Mode parse_mode(std::string_view s)
{
    for (Mode m : {Mode::Random, Mode::Eud, Mode::InfiniteP, Mode::EudLimit, Mode::SingleAntenna})
        if (s == to_string(m))
            return m;
    throw ConfigError("unknown mode '" + std::string(s) +
                      "' (expected random, eud, infinite_p, eud_limit or single_antenna)");
}

inline bool has_simulator(Mode mode) { return mode != Mode::EudLimit; }

inline mcsim::AccessMode access_mode(Mode mode)
{
    switch (mode)
    {
    case Mode::Random:
        return mcsim::AccessMode::Random;
    case Mode::Eud:
        return mcsim::AccessMode::Eud;
    case Mode::InfiniteP:
        return mcsim::AccessMode::InfiniteP;
    case Mode::SingleAntenna:
        return mcsim::AccessMode::SingleAntenna;
    case Mode::EudLimit:
        break;
    }
    throw std::invalid_argument("eud_limit has no simulator counterpart");
}

/// A Cartesian parameter grid: M x P x mode x load x rho.
/// Loads are given either as eta values (N_a = eta * C must be integral) or
/// directly as N_a values.
struct SweepSpec
{
    std::vector<int> antennas{100};
    std::vector<int> preambles{64};
    int channels = 10;
    std::vector<double> etas{4.0};
    std::vector<int> active_ues; // overrides etas when nonempty
    std::vector<double> rho_db{0.0};
    double gamma_th_db = 8.0;
    BeamformerKind beamformer = BeamformerKind::CB;
    mcsim::ChannelModel channel = mcsim::IidRayleigh{};
    std::vector<Mode> modes{Mode::Random};
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool run_analytic = true;
    bool run_mc = false;

    /// N_a values of the load axis, in grid order.
    std::vector<int> load_points() const
    {
        if (!active_ues.empty())
            return active_ues;
        std::vector<int> out;
        out.reserve(etas.size());
        for (double eta : etas)
            out.push_back(static_cast<int>(std::lround(eta * channels)));
        return out;
    }

    void validate() const
    {
        auto increasing = [](const auto &v, const char *name) {
            if (v.empty())
                throw ConfigError(std::string(name) + ": list must not be empty");
            for (std::size_t i = 1; i < v.size(); ++i)
                if (!(v[i] > v[i - 1]))
                    throw ConfigError(std::string(name) + ": values must be strictly increasing");
        };
        increasing(antennas, "antennas");
        increasing(preambles, "preambles");
        increasing(rho_db, "rho-db");
        if (active_ues.empty())
            increasing(etas, "eta");
        else
            increasing(active_ues, "active-ues");
        if (modes.empty())
            throw ConfigError("modes: list must not be empty");

        if (antennas.front() < 1)
            throw ConfigError("antennas must be >= 1");
        if (preambles.front() < 1)
            throw ConfigError("preambles must be >= 1");
        if (channels < 1)
            throw ConfigError("channels must be >= 1");
        if (!active_ues.empty() && active_ues.front() < 1)
            throw ConfigError("active-ues must be >= 1");
        for (double eta : etas)
        {
            if (!active_ues.empty())
                break;
            const double n = eta * channels;
            if (!(eta > 0.0) || std::fabs(n - std::round(n)) > 1e-9 || std::round(n) < 1.0)
                throw ConfigError("eta " + std::to_string(eta) + " times C = " + std::to_string(channels) +
                                  " is not a positive integer number of UEs");
        }
        for (double r : rho_db)
            if (!std::isfinite(r))
                throw ConfigError("rho-db values must be finite");
        if (!std::isfinite(gamma_th_db))
            throw ConfigError("gamma-db must be finite");
        if (run_mc && trials < 1)
            throw ConfigError("trials must be >= 1");
        if (!run_analytic && !run_mc)
            throw ConfigError("nothing to evaluate");
        if (run_mc && !run_analytic)
            for (Mode m : modes)
                if (!has_simulator(m))
                    throw ConfigError("mode eud_limit is analytic only and cannot be simulated");
        try
        {
            mcsim::validate(channel);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
    }
};

/// One evaluated grid point; absent values are written as empty CSV fields.
struct ResultRow
{
    int antennas = 0;
    int channels = 0;
    int preambles = 0;
    int active_ues = 0;
    double eta = 0.0;
    double rho_db = 0.0;
    double gamma_th_db = 0.0;
    std::string beamformer;
    std::string channel_model;
    std::string mode;
    std::optional<double> analytic;
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
};

/// A grid point that could not be evaluated.
struct PointFailure
{
    std::string where;
    std::string message;
};

} // namespace gfra::cli

#endif
