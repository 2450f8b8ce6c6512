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

#ifndef GFRA_MCSIM_CHANNEL_HPP
#define GFRA_MCSIM_CHANNEL_HPP

#include "philox.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace gfra::mcsim
{

/// Small-scale fading vectors, one column per UE; column 0 is the tagged UE.
/// Large-scale fading is absorbed by perfect power control.
using ChannelMatrix = Eigen::MatrixXcd;

struct IidRayleigh
{
};

/// Uniform linear array with a finite number of independently faded paths
/// clustered around the UE azimuth.
struct CorrelatedRayleigh
{
    double angle_spread_deg = 20.0;
    double azimuth_low_deg = -60.0;
    double azimuth_high_deg = 60.0;
    double antenna_spacing = 0.5;   // in wavelengths
    std::optional<int> num_paths{}; // unset: M/2 (at least 1)

    void validate() const
    {
        if (!(angle_spread_deg > 0.0))
            throw std::invalid_argument("correlated channel: angle spread must be positive");
        if (!(azimuth_low_deg < azimuth_high_deg))
            throw std::invalid_argument("correlated channel: azimuth_low must be below azimuth_high");
        if (!(antenna_spacing > 0.0))
            throw std::invalid_argument("correlated channel: antenna spacing must be positive");
        if (num_paths && *num_paths < 1)
            throw std::invalid_argument("correlated channel: number of paths must be >= 1");
    }

    int paths_for(int antennas) const noexcept
    {
        if (num_paths)
            return *num_paths;
        return antennas / 2 > 0 ? antennas / 2 : 1;
    }
};

using ChannelModel = std::variant<IidRayleigh, CorrelatedRayleigh>;

inline std::string to_string(const ChannelModel &model)
{
    return std::holds_alternative<IidRayleigh>(model) ? "iid" : "correlated";
}

inline void validate(const ChannelModel &model)
{
    if (const auto *c = std::get_if<CorrelatedRayleigh>(&model))
        c->validate();
}

namespace detail
{
inline void fill_iid(RngStream &rng, ChannelMatrix &h)
{
    for (Eigen::Index col = 0; col < h.cols(); ++col)
        for (Eigen::Index row = 0; row < h.rows(); ++row)
            h(row, col) = rng.complex_normal();
}

// h = (1/sqrt(Q)) sum_q v_q [1, z_q, z_q^2, ...]^T with z_q = e^{-j 2 pi w cos(phi_q)}
inline void fill_correlated(RngStream &rng, const CorrelatedRayleigh &model, ChannelMatrix &h)
{
    constexpr double deg = std::numbers::pi / 180.0;
    const int paths = model.paths_for(static_cast<int>(h.rows()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(paths));
    for (Eigen::Index col = 0; col < h.cols(); ++col)
    {
        auto column = h.col(col);
        column.setZero();
        const double azimuth =
            model.azimuth_low_deg + (model.azimuth_high_deg - model.azimuth_low_deg) * rng.uniform();
        for (int q = 0; q < paths; ++q)
        {
            const double phi = azimuth + model.angle_spread_deg * (rng.uniform() - 0.5);
            const std::complex<double> gain = rng.complex_normal() * scale;
            const std::complex<double> step =
                std::polar(1.0, -2.0 * std::numbers::pi * model.antenna_spacing * std::cos(phi * deg));
            std::complex<double> phasor = gain;
            for (Eigen::Index m = 0; m < column.size(); ++m)
            {
                column(m) += phasor;
                phasor *= step;
            }
        }
    }
}
} // namespace detail

/// Draws `count` channel vectors of length `antennas`.
inline ChannelMatrix gen_channels(RngStream &rng, const ChannelModel &model, int antennas, int count)
{
    if (antennas < 1 || count < 1)
        throw std::invalid_argument("gen_channels: antennas and count must be >= 1");
    ChannelMatrix h(antennas, count);
    std::visit(
        [&](const auto &m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IidRayleigh>)
                detail::fill_iid(rng, h);
            else
                detail::fill_correlated(rng, m, h);
        },
        model);
    return h;
}

} // namespace gfra::mcsim

#endif
