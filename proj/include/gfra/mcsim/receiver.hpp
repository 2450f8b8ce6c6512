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

#ifndef GFRA_MCSIM_RECEIVER_HPP
#define GFRA_MCSIM_RECEIVER_HPP

// Receive beamforming at the base station. SINRs are expected-power
// quantities: unit-power independent symbols and unit noise power per antenna,
// so the noise term of a combiner w is ||w||^2.

#include "access.hpp"
#include "channel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <optional>
#include <stdexcept>

namespace gfra::mcsim
{

/// [h_1, a_1, ..., a_S] with a_s the sum of the channels in W_s (noiseless
/// estimation from each detected preamble).
using EstimatedBasis = Eigen::MatrixXcd;

/// Bases whose Gram matrix has a reciprocal condition estimate below this are
/// treated as non-invertible by the receiver.
inline constexpr double kMinReciprocalCondition = 1e-12;

inline EstimatedBasis estimate_basis(const ChannelMatrix &h, const PreambleAssignment &assignment)
{
    if (assignment.tagged_collided())
        throw std::invalid_argument("estimate_basis: tagged UE collided, no usable estimate");
    if (h.cols() < 1)
        throw std::invalid_argument("estimate_basis: empty channel matrix");
    EstimatedBasis a(h.rows(), assignment.num_groups() + 1);
    a.col(0) = h.col(0);
    for (int s = 0; s < assignment.num_groups(); ++s)
    {
        auto col = a.col(s + 1);
        col.setZero();
        for (int j : assignment.groups[static_cast<std::size_t>(s)])
        {
            if (j < 1 || j >= h.cols())
                throw std::out_of_range("estimate_basis: group member outside channel matrix");
            col += h.col(j);
        }
    }
    return a;
}

/// Conjugate beamforming SINR of column 0 against all other columns.
inline double cb_sinr(const ChannelMatrix &h, double uplink_snr)
{
    if (h.cols() < 1)
        throw std::invalid_argument("cb_sinr: empty channel matrix");
    const auto h1 = h.col(0);
    const double gain = h1.squaredNorm();
    if (gain == 0.0)
        return 0.0;
    double interference = 0.0;
    for (Eigen::Index i = 1; i < h.cols(); ++i)
        interference += std::norm(h1.dot(h.col(i)));
    return uplink_snr * gain * gain / (gain + uplink_snr * interference);
}

/// First row of the zero-forcing receiver (A^H A)^{-1} A^H, stored as the
/// column vector w with b_1 h = w^H h.
struct ZfCombiner
{
    Eigen::VectorXcd w;
    double noise_gain; // ||w||^2 = [(A^H A)^{-1}]_{11}
};

/// Empty when the basis has more columns than rows or its Gram matrix is not
/// safely invertible.
inline std::optional<ZfCombiner> zf_combiner(const EstimatedBasis &a)
{
    if (a.cols() < 1 || a.cols() > a.rows())
        return std::nullopt;
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition))
        return std::nullopt;
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(a.cols());
    e1(0) = 1.0;
    const Eigen::VectorXcd g = llt.solve(e1); // first column of (A^H A)^{-1}
    ZfCombiner out{a * g, 0.0};
    out.noise_gain = out.w.squaredNorm();
    return out;
}

/// Zero-forcing SINR of column 0, interference summed over every other column
/// of `h`. Empty when the receiver cannot be formed.
inline std::optional<double> zf_sinr(const ChannelMatrix &h, const EstimatedBasis &basis, double uplink_snr)
{
    if (basis.cols() > basis.rows())
        throw std::invalid_argument("zf_sinr: more basis columns than antennas");
    const auto combiner = zf_combiner(basis);
    if (!combiner)
        return std::nullopt;
    const double signal = std::norm(combiner->w.dot(h.col(0)));
    double interference = 0.0;
    for (Eigen::Index i = 1; i < h.cols(); ++i)
        interference += std::norm(combiner->w.dot(h.col(i)));
    return uplink_snr * signal / (combiner->noise_gain + uplink_snr * interference);
}

} // namespace gfra::mcsim

#endif
