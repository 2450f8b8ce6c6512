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

#ifndef GFRA_MCSIM_ACCESS_HPP
#define GFRA_MCSIM_ACCESS_HPP

// Channel and preamble selection of one random-access slot, seen from the
// tagged UE.

#include "../specfun.hpp"
#include "philox.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gfra::mcsim
{

/// How UEs spread over channels and preambles.
///   Random        - uniform channel and preamble choice
///   Eud           - exactly N_a/C UEs on every channel
///   InfiniteP     - uniform channel choice, preambles never shared
///   SingleAntenna - slotted-ALOHA reference: success iff alone on the channel
enum class AccessMode
{
    Random,
    Eud,
    InfiniteP,
    SingleAntenna
};

inline std::string_view to_string(AccessMode mode)
{
    switch (mode)
    {
    case AccessMode::Random:
        return "random";
    case AccessMode::Eud:
        return "eud";
    case AccessMode::InfiniteP:
        return "infinite_p";
    case AccessMode::SingleAntenna:
        return "single_antenna";
    }
    return "?";
}

/// Samples the number K of other UEs on the tagged UE's channel. The
/// binomial law is tabulated once and inverted with one uniform per draw.
class CochannelCountSampler
{
public:
    CochannelCountSampler(int active_ues, int channels, AccessMode mode) : mode_(mode)
    {
        if (active_ues < 1 || channels < 1)
            throw std::invalid_argument("cochannel count: N_a and C must be >= 1");
        if (mode == AccessMode::Eud)
        {
            if (active_ues % channels != 0)
                throw std::invalid_argument("cochannel count: even distribution needs integer N_a/C");
            fixed_ = active_ues / channels - 1;
            return;
        }
        const auto n = static_cast<std::uint64_t>(active_ues - 1);
        const double p = 1.0 / channels;
        cdf_.reserve(n + 1);
        double acc = 0.0;
        for (std::uint64_t k = 0; k <= n; ++k)
        {
            acc += specfun::binomial_pmf(k, n, p);
            cdf_.push_back(acc);
            if (acc >= 1.0 - 1e-16)
                break;
        }
        cdf_.back() = 2.0; // absorbs rounding so every uniform maps to a value
    }

    int operator()(RngStream &rng) const
    {
        if (mode_ == AccessMode::Eud)
            return fixed_;
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<int>(it - cdf_.begin());
    }

private:
    AccessMode mode_;
    int fixed_ = 0;
    std::vector<double> cdf_;
};

inline int draw_cochannel_count(RngStream &rng, int active_ues, int channels, AccessMode mode)
{
    return CochannelCountSampler(active_ues, channels, mode)(rng);
}

/// Outcome of preamble selection. Contenders are numbered 1..K (the tagged UE
/// is 0), matching the column order of ChannelMatrix.
struct PreambleAssignment
{
    std::uint64_t tagged_preamble = 0;
    std::vector<std::vector<int>> groups; // W_1..W_S, ordered by preamble value
    std::vector<int> colliders_with_tag;

    int num_groups() const noexcept { return static_cast<int>(groups.size()); }
    bool tagged_collided() const noexcept { return !colliders_with_tag.empty(); }
};

/// Tagged UE and K contenders pick preambles i.i.d. uniformly from P. With
/// `infinite_pool` every pick is distinct.
inline PreambleAssignment assign_preambles(RngStream &rng, int contenders, int pool_size, bool infinite_pool)
{
    if (contenders < 0)
        throw std::invalid_argument("assign_preambles: K must be >= 0");
    if (pool_size < 1 && !infinite_pool)
        throw std::invalid_argument("assign_preambles: P must be >= 1");
    PreambleAssignment out;
    if (infinite_pool)
    {
        out.tagged_preamble = 0;
        out.groups.reserve(static_cast<std::size_t>(contenders));
        for (int i = 1; i <= contenders; ++i)
            out.groups.push_back({i});
        return out;
    }

    const auto pool = static_cast<std::uint32_t>(pool_size);
    out.tagged_preamble = rng.below(pool);
    std::vector<std::pair<std::uint32_t, int>> picks;
    picks.reserve(static_cast<std::size_t>(contenders));
    for (int i = 1; i <= contenders; ++i)
    {
        const std::uint32_t p = rng.below(pool);
        if (p == out.tagged_preamble)
            out.colliders_with_tag.push_back(i);
        else
            picks.emplace_back(p, i);
    }
    std::sort(picks.begin(), picks.end());
    for (std::size_t j = 0; j < picks.size(); ++j)
    {
        if (j == 0 || picks[j].first != picks[j - 1].first)
            out.groups.emplace_back();
        out.groups.back().push_back(picks[j].second);
    }
    return out;
}

} // namespace gfra::mcsim

#endif
