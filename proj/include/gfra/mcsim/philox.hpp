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

#ifndef GFRA_MCSIM_PHILOX_HPP
#define GFRA_MCSIM_PHILOX_HPP

// Philox4x32-10 counter-based generator (Salmon et al., SC'11, as shipped in
// Random123) and a per-trial stream on top of it.
//
// Stream layout, stable across releases:
//   key     = (seed & 0xffffffff, seed >> 32)
//   counter = (block & 0xffffffff, block >> 32, stream & 0xffffffff, stream >> 32)
// where `stream` is the trial index and `block` counts 128-bit outputs drawn
// by that trial. Every distribution below consumes whole 32-bit words in a
// fixed order, so a trial's draws depend only on (seed, trial index).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace gfra::mcsim
{

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept
{
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round)
    {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// Independent random stream for one trial.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)), stream_hi_(static_cast<std::uint32_t>(stream >> 32))
    {
    }

    std::uint32_t next_u32() noexcept
    {
        if (used_ == 4)
            refill();
        return buffer_[used_++];
    }

    /// Uniform double in (0, 1] with 53 random bits.
    double uniform() noexcept
    {
        const std::uint64_t hi = next_u32() >> 5; // 27 bits
        const std::uint64_t lo = next_u32() >> 6; // 26 bits
        return (static_cast<double>((hi << 26) | lo) + 1.0) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n >= 1, unbiased (Lemire's multiply-shift
    /// with rejection).
    std::uint32_t below(std::uint32_t n) noexcept
    {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n)
        {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
            while (low < threshold)
            {
                m = static_cast<std::uint64_t>(next_u32()) * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    /// Circularly symmetric complex Gaussian CN(0, 1) (Box-Muller, polar form
    /// of the radius: |z|^2 = -ln(u1) is Exp(1)).
    std::complex<double> complex_normal() noexcept
    {
        const double radius = std::sqrt(-std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill() noexcept
    {
        buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                 stream_lo_, stream_hi_},
                                key_);
        ++block_;
        used_ = 0;
    }

    PhiloxKey key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

} // namespace gfra::mcsim

#endif
