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

#ifndef GFRA_MCSIM_TRIALS_HPP
#define GFRA_MCSIM_TRIALS_HPP

#include "../params.hpp"
#include "access.hpp"
#include "channel.hpp"
#include "philox.hpp"
#include "receiver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gfra::mcsim
{

struct TrialOutcome
{
    int contenders = 0; // K
    int groups = 0;     // S
    bool tagged_collided = false;
    double sinr = std::numeric_limits<double>::quiet_NaN(); // only set when not collided
    bool success = false;
};

struct McEstimate
{
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t success_count = 0;
    std::uint64_t seed = 0;

    static McEstimate from_counts(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed)
    {
        McEstimate e;
        e.trials = trials;
        e.success_count = successes;
        e.seed = seed;
        e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
        e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
        return e;
    }
};

/// Everything one trial needs, validated once per run.
class TrialRunner
{
public:
    TrialRunner(const SystemParams &params, ChannelModel model, BeamformerKind kind, AccessMode mode)
        : params_(params), model_(std::move(model)), kind_(kind), mode_(mode),
          sampler_(validated(params).active_ues, params.channels, mode)
    {
        mcsim::validate(model_);
    }

    TrialOutcome run(std::uint64_t seed, std::uint64_t index) const
    {
        RngStream rng(seed, index);
        TrialOutcome out;
        out.contenders = sampler_(rng);
        if (mode_ == AccessMode::SingleAntenna)
        {
            // a shared channel means a data collision for a single antenna
            out.tagged_collided = out.contenders > 0;
            out.success = !out.tagged_collided;
            return out;
        }
        const auto assignment =
            assign_preambles(rng, out.contenders, params_.preambles, mode_ == AccessMode::InfiniteP);
        out.groups = assignment.num_groups();
        out.tagged_collided = assignment.tagged_collided();
        if (out.tagged_collided)
            return out;

        const ChannelMatrix h = gen_channels(rng, model_, params_.antennas, out.contenders + 1);
        if (kind_ == BeamformerKind::CB)
        {
            out.sinr = cb_sinr(h, params_.uplink_snr);
        }
        else
        {
            if (out.groups + 1 > params_.antennas)
                return out; // more estimated directions than antennas: ZF cannot be formed
            const auto sinr = zf_sinr(h, estimate_basis(h, assignment), params_.uplink_snr);
            if (!sinr)
                return out;
            out.sinr = *sinr;
        }
        out.success = out.sinr >= params_.sinr_threshold;
        return out;
    }

private:
    static const SystemParams &validated(const SystemParams &p)
    {
        p.validate();
        return p;
    }

    SystemParams params_;
    ChannelModel model_;
    BeamformerKind kind_;
    AccessMode mode_;
    CochannelCountSampler sampler_;
};

/// Monte Carlo success-rate estimate. Trial i uses stream (seed, i), so the
/// count is identical for every `threads` value.
inline McEstimate run_trials(const SystemParams &params, const ChannelModel &model, BeamformerKind kind,
                             AccessMode mode, std::uint64_t trials, std::uint64_t seed, unsigned threads = 1)
{
    if (trials < 1)
        throw std::invalid_argument("run_trials: trials must be >= 1");
    const TrialRunner runner(params, model, kind, mode);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 1024))));

    auto count_range = [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t n = 0;
        for (std::uint64_t i = begin; i < end; ++i)
            n += runner.run(seed, i).success ? 1 : 0;
        return n;
    };

    if (threads == 1)
        return McEstimate::from_counts(count_range(0, trials), trials, seed);

    std::vector<std::uint64_t> counts(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
    {
        const std::uint64_t begin = trials * t / threads;
        const std::uint64_t end = trials * (t + 1) / threads;
        pool.emplace_back([&, t, begin, end] {
            try
            {
                counts[t] = count_range(begin, end);
            }
            catch (...)
            {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &th : pool)
        th.join();
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    std::uint64_t total = 0;
    for (auto c : counts)
        total += c;
    return McEstimate::from_counts(total, trials, seed);
}

// ---------------------------------------------------------------------------
// Distribution diagnostics
// ---------------------------------------------------------------------------

/// One conditioned realization of the quantities behind the closed forms:
///   y_k   = (1/M) sum_{i>=1} |h_0^H h_i|^2           (CB interference)
///   u_1   = 1 / [(A^H A)^{-1}]_{11}                  (ZF signal gain)
///   z_val = u_1 * sum |w^H h_i|^2 over members of groups with >= 2 UEs,
/// so that the ZF SINR equals rho u_1 / (rho z_val + 1). Singleton groups are
/// nulled exactly by construction and contribute nothing.
struct DiagnosticSample
{
    double y_k;
    double u_1;
    double z_val;
};

/// Groups contenders 1..K round-robin into S groups (sizes differ by at most 1).
inline PreambleAssignment balanced_assignment(int contenders, int groups)
{
    PreambleAssignment a;
    a.groups.resize(static_cast<std::size_t>(groups));
    for (int i = 1; i <= contenders; ++i)
        a.groups[static_cast<std::size_t>((i - 1) % groups)].push_back(i);
    return a;
}

/// Draws `samples` diagnostic realizations with K contenders forced into S
/// groups. Samples whose ZF basis is not invertible are skipped and the next
/// stream index is used, so the result always holds `samples` entries.
inline std::vector<DiagnosticSample> collect_diagnostics(int antennas, const ChannelModel &model, int contenders,
                                                         int groups, std::uint64_t samples, std::uint64_t seed)
{
    if (antennas < 1 || contenders < 0 || groups < 0)
        throw std::invalid_argument("collect_diagnostics: negative argument");
    if (groups > contenders)
        throw std::invalid_argument("collect_diagnostics: S must not exceed K");
    if (contenders > 0 && groups == 0)
        throw std::invalid_argument("collect_diagnostics: K > 0 contenders need S >= 1 groups");
    if (groups + 1 > antennas)
        throw std::invalid_argument("collect_diagnostics: S + 1 must not exceed M");
    validate(model);

    const PreambleAssignment assignment =
        groups > 0 ? balanced_assignment(contenders, groups) : PreambleAssignment{};
    std::vector<DiagnosticSample> out;
    out.reserve(samples);
    const std::uint64_t max_attempts = samples * 4 + 1000;
    for (std::uint64_t index = 0; out.size() < samples; ++index)
    {
        if (index >= max_attempts)
            throw std::runtime_error("collect_diagnostics: too many singular bases");
        RngStream rng(seed, index);
        const ChannelMatrix h = gen_channels(rng, model, antennas, contenders + 1);
        const auto h0 = h.col(0);
        double y = 0.0;
        for (Eigen::Index i = 1; i < h.cols(); ++i)
            y += std::norm(h0.dot(h.col(i)));
        y /= antennas;

        const auto combiner = zf_combiner(estimate_basis(h, assignment));
        if (!combiner)
            continue;
        const double u = 1.0 / combiner->noise_gain;
        double leak = 0.0;
        for (const auto &group : assignment.groups)
        {
            if (group.size() < 2)
                continue;
            for (int j : group)
                leak += std::norm(combiner->w.dot(h.col(j)));
        }
        out.push_back({y, u, leak * u});
    }
    return out;
}

} // namespace gfra::mcsim

#endif
