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

#include "gfra/analytic.hpp"
#include "gfra/mcsim/trials.hpp"
#include "gfra/specfun.hpp"
#include "gfra/stats.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <Eigen/QR>

#include <cmath>
#include <map>
#include <set>
#include <vector>

using namespace gfra;
using namespace gfra::mcsim;

namespace
{
const double kGamma8dB = db_to_linear(8.0);

SystemParams point(int m, int p, int c, int n_a, double rho = 1.0, double gamma = kGamma8dB)
{
    SystemParams s;
    s.antennas = m;
    s.preambles = p;
    s.channels = c;
    s.active_ues = n_a;
    s.uplink_snr = rho;
    s.sinr_threshold = gamma;
    return s;
}

Eigen::MatrixXcd random_unitary(int m, std::uint64_t seed)
{
    RngStream rng(seed, 0);
    ChannelMatrix g = gen_channels(rng, IidRayleigh{}, m, m);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
}

PreambleAssignment singletons(int k)
{
    PreambleAssignment a;
    for (int i = 1; i <= k; ++i)
        a.groups.push_back({i});
    return a;
}
} // namespace

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

TEST(Philox, KnownAnswerVectors)
{
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, StreamsAreReproducibleAndDistinct)
{
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 64; ++i)
    {
        const auto va = a.next_u32();
        EXPECT_EQ(va, b.next_u32());
        differs_c = differs_c || va != c.next_u32();
        differs_d = differs_d || va != d.next_u32();
    }
    EXPECT_TRUE(differs_c);
    EXPECT_TRUE(differs_d);
    EXPECT_EQ(a.blocks_used(), 16u);
}

TEST(RngStream, UniformMoments)
{
    RngStream rng(1, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        sum += u;
        sum2 += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sum2 / n, 1.0 / 3.0, 0.003);
}

TEST(RngStream, BelowIsUniform)
{
    for (std::uint32_t n : {1u, 3u, 7u, 64u, 1000u})
    {
        RngStream rng(5, n);
        std::vector<int> counts(n, 0);
        const int draws = 20000 * static_cast<int>(std::min<std::uint32_t>(n, 64));
        for (int i = 0; i < draws; ++i)
        {
            const auto v = rng.below(n);
            ASSERT_LT(v, n);
            ++counts[v];
        }
        double chi2 = 0.0;
        const double expected = static_cast<double>(draws) / n;
        for (int c : counts)
            chi2 += (c - expected) * (c - expected) / expected;
        // mean n-1, sd sqrt(2(n-1)); generous 6 sd band
        EXPECT_LE(chi2, (n - 1.0) + 6.0 * std::sqrt(2.0 * (n - 1.0)) + 1.0) << "n=" << n;
    }
}

TEST(RngStream, ComplexNormalMoments)
{
    RngStream rng(2, 0);
    const int n = 200000;
    std::complex<double> mean = 0.0;
    double power = 0.0, re2 = 0.0;
    std::complex<double> pseudo = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const auto z = rng.complex_normal();
        mean += z;
        power += std::norm(z);
        re2 += z.real() * z.real();
        pseudo += z * z;
    }
    EXPECT_LT(std::abs(mean / double(n)), 0.01);
    EXPECT_NEAR(power / n, 1.0, 0.01);
    EXPECT_NEAR(re2 / n, 0.5, 0.01);
    EXPECT_LT(std::abs(pseudo / double(n)), 0.01); // circular symmetry
}

// ---------------------------------------------------------------------------
// Access
// ---------------------------------------------------------------------------

TEST(CochannelCount, Examples)
{
    RngStream rng(3, 0);
    for (int i = 0; i < 1000; ++i)
    {
        EXPECT_EQ(draw_cochannel_count(rng, 1, 10, AccessMode::Random), 0);
        EXPECT_EQ(draw_cochannel_count(rng, 50, 10, AccessMode::Eud), 4);
    }
    EXPECT_THROW(draw_cochannel_count(rng, 55, 10, AccessMode::Eud), std::invalid_argument);
    EXPECT_THROW(CochannelCountSampler(0, 10, AccessMode::Random), std::invalid_argument);

    const CochannelCountSampler sampler(50, 10, AccessMode::Random);
    const int n = 100000;
    std::vector<int> freq(50, 0);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const int k = sampler(rng);
        ASSERT_GE(k, 0);
        ASSERT_LE(k, 49);
        ++freq[static_cast<std::size_t>(k)];
        sum += k;
    }
    EXPECT_NEAR(sum / n, 4.9, 0.05);
    for (int k = 0; k <= 12; ++k)
    {
        const double p = specfun::binomial_pmf(k, 49, 0.1);
        EXPECT_NEAR(freq[static_cast<std::size_t>(k)] / double(n), p, 4.0 * std::sqrt(p * (1 - p) / n)) << k;
    }
}

TEST(Preambles, Examples)
{
    RngStream rng(4, 0);
    for (int k = 1; k <= 20; ++k)
        EXPECT_TRUE(assign_preambles(rng, k, 1, false).tagged_collided());
    const auto inf = assign_preambles(rng, 7, 1, true);
    EXPECT_EQ(inf.num_groups(), 7);
    EXPECT_FALSE(inf.tagged_collided());
    EXPECT_THROW(assign_preambles(rng, -1, 4, false), std::invalid_argument);

    std::uint64_t hits = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
    {
        RngStream trial(4, static_cast<std::uint64_t>(i) + 1);
        const auto a = assign_preambles(trial, 2, 4, false);
        hits += (!a.tagged_collided() && a.num_groups() == 2) ? 1 : 0;
    }
    EXPECT_NEAR(hits / double(n), 0.375, 0.002);
}

TEST(Preambles, PartitionInvariant)
{
    for (int trial = 0; trial < 2000; ++trial)
    {
        RngStream rng(6, static_cast<std::uint64_t>(trial));
        const int k = trial % 30;
        const int p = 1 + trial % 17;
        const auto a = assign_preambles(rng, k, p, false);
        ASSERT_LT(a.tagged_preamble, static_cast<std::uint64_t>(p));
        std::set<int> seen(a.colliders_with_tag.begin(), a.colliders_with_tag.end());
        EXPECT_EQ(seen.size(), a.colliders_with_tag.size());
        for (const auto &g : a.groups)
        {
            ASSERT_FALSE(g.empty());
            for (int j : g)
                EXPECT_TRUE(seen.insert(j).second) << "duplicate member " << j;
        }
        EXPECT_EQ(static_cast<int>(seen.size()), k);
        if (k > 0)
        {
            EXPECT_EQ(*seen.begin(), 1);
            EXPECT_EQ(*seen.rbegin(), k);
        }
        EXPECT_LE(a.num_groups(), std::min(k, p - 1));
    }
}

TEST(Preambles, OccupancyFrequenciesMatchTable)
{
    const int n = 40000;
    for (int p : {4, 64})
    {
        const specfun::OccupancyTable table(10, static_cast<std::uint64_t>(p));
        for (int k = 0; k <= 10; ++k)
        {
            std::map<int, int> counts;
            for (int i = 0; i < n; ++i)
            {
                RngStream rng(100 + static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k) * n + i);
                const auto a = assign_preambles(rng, k, p, false);
                if (!a.tagged_collided())
                    ++counts[a.num_groups()];
            }
            for (unsigned s = 0; s <= table.max_groups(static_cast<std::uint64_t>(k)); ++s)
            {
                const double q = table(static_cast<std::uint64_t>(k), s);
                const double freq = counts[static_cast<int>(s)] / double(n);
                EXPECT_NEAR(freq, q, 3.0 * std::sqrt(q * (1.0 - q) / n) + 1e-12)
                    << "K=" << k << " S=" << s << " P=" << p;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

TEST(Channels, IidUnitPower)
{
    double sum = 0.0;
    const int n = 10000, m = 16;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(7, static_cast<std::uint64_t>(i));
        sum += gen_channels(rng, IidRayleigh{}, m, 1).squaredNorm() / m;
    }
    EXPECT_NEAR(sum / n, 1.0, 0.03);
}

TEST(Channels, CorrelatedUnitPower)
{
    for (int m : {8, 64})
    {
        double sum = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i)
        {
            RngStream rng(8, static_cast<std::uint64_t>(i));
            sum += gen_channels(rng, CorrelatedRayleigh{}, m, 1).squaredNorm() / m;
        }
        EXPECT_NEAR(sum / n, 1.0, 0.03) << "M=" << m;
    }
}

TEST(Channels, SinglePathIsASteeringVector)
{
    CorrelatedRayleigh model;
    model.num_paths = 1;
    RngStream rng(9, 0);
    const ChannelMatrix h = gen_channels(rng, model, 32, 5);
    for (Eigen::Index c = 0; c < h.cols(); ++c)
    {
        // constant modulus and a constant phase step between adjacent antennas
        const auto col = h.col(c);
        const std::complex<double> step = col(1) / col(0);
        EXPECT_NEAR(std::abs(step), 1.0, 1e-12);
        for (Eigen::Index m = 1; m < col.size(); ++m)
        {
            EXPECT_NEAR(std::abs(col(m)), std::abs(col(0)), 1e-9);
            EXPECT_LT(std::abs(col(m) / col(m - 1) - step), 1e-9);
        }
    }
}

TEST(Channels, PathCountAndValidation)
{
    CorrelatedRayleigh model;
    EXPECT_EQ(model.paths_for(400), 200);
    EXPECT_EQ(model.paths_for(51), 25);
    EXPECT_EQ(model.paths_for(1), 1);
    model.angle_spread_deg = 0.0;
    EXPECT_THROW(validate(ChannelModel{model}), std::invalid_argument);
    model = CorrelatedRayleigh{};
    model.azimuth_low_deg = 10.0;
    model.azimuth_high_deg = 10.0;
    EXPECT_THROW(validate(ChannelModel{model}), std::invalid_argument);
    model = CorrelatedRayleigh{};
    model.num_paths = 0;
    EXPECT_THROW(validate(ChannelModel{model}), std::invalid_argument);
    EXPECT_EQ(to_string(ChannelModel{IidRayleigh{}}), "iid");
    EXPECT_EQ(to_string(ChannelModel{CorrelatedRayleigh{}}), "correlated");
}

// ---------------------------------------------------------------------------
// Receivers
// ---------------------------------------------------------------------------

TEST(Basis, Examples)
{
    ChannelMatrix h(2, 4);
    h << 1, 5, 0, 1, //
        0, 7, 1, 0;
    EXPECT_EQ(estimate_basis(h, PreambleAssignment{}).cols(), 1);

    PreambleAssignment a;
    a.groups = {{2, 3}};
    const auto basis = estimate_basis(h, a);
    ASSERT_EQ(basis.cols(), 2);
    EXPECT_EQ(basis(0, 1), std::complex<double>(1.0));
    EXPECT_EQ(basis(1, 1), std::complex<double>(1.0));

    RngStream rng(10, 0);
    const ChannelMatrix g = gen_channels(rng, IidRayleigh{}, 6, 4);
    EXPECT_EQ(estimate_basis(g, singletons(3)), g);

    a.colliders_with_tag = {1};
    EXPECT_THROW(estimate_basis(h, a), std::invalid_argument);
}

TEST(CbSinr, Examples)
{
    ChannelMatrix h1(2, 1);
    h1 << std::complex<double>(1, 2), std::complex<double>(-0.5, 0);
    EXPECT_NEAR(cb_sinr(h1, 3.0), 3.0 * h1.squaredNorm(), 1e-14);

    ChannelMatrix h(2, 2);
    h << 1, 1, //
        1, -1;
    EXPECT_NEAR(cb_sinr(h, 1.0), 2.0, 1e-15);

    ChannelMatrix same(2, 2);
    same.col(0) << std::complex<double>(1, 1), 2.0;
    same.col(1) = same.col(0);
    const double g = same.col(0).squaredNorm();
    const double rho = 0.7;
    EXPECT_NEAR(cb_sinr(same, rho), rho * g * g / (g + rho * g * g), 1e-14);
    EXPECT_EQ(cb_sinr(ChannelMatrix::Zero(3, 2), 1.0), 0.0);
}

TEST(ZfSinr, Examples)
{
    ChannelMatrix h(2, 3);
    h << 1, 0, 1, //
        0, 1, 0;
    PreambleAssignment a;
    a.groups = {{1, 2}};
    const auto basis = estimate_basis(h, a);
    const auto combiner = zf_combiner(basis);
    ASSERT_TRUE(combiner);
    EXPECT_NEAR(std::abs(combiner->w(0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(combiner->w(1) + 1.0), 0.0, 1e-14);
    EXPECT_NEAR(*zf_sinr(h, basis, 1.0), 0.25, 1e-14);
    EXPECT_NEAR(*zf_sinr(h, basis, 3.0), 3.0 / (2.0 + 6.0), 1e-14);

    const ChannelMatrix eye = ChannelMatrix::Identity(4, 3);
    EXPECT_NEAR(*zf_sinr(eye, estimate_basis(eye, singletons(2)), 2.5), 2.5, 1e-14);

    ChannelMatrix wide(2, 3);
    wide.setOnes();
    EXPECT_THROW(zf_sinr(wide, estimate_basis(wide, singletons(2)), 1.0), std::invalid_argument);
    ChannelMatrix twin(3, 2);
    twin.col(0) << 1, 2, 3;
    twin.col(1) = twin.col(0);
    EXPECT_FALSE(zf_sinr(twin, estimate_basis(twin, singletons(1)), 1.0));
}

TEST(ZfSinr, ExactNullingWithSingletonGroups)
{
    for (int m : {8, 50, 400})
        for (int k : {1, 5, 20})
        {
            if (k + 1 > m)
                continue;
            RngStream rng(11, static_cast<std::uint64_t>(m * 100 + k));
            const ChannelMatrix h = gen_channels(rng, IidRayleigh{}, m, k + 1);
            const auto combiner = zf_combiner(estimate_basis(h, singletons(k)));
            ASSERT_TRUE(combiner);
            const double signal = std::norm(combiner->w.dot(h.col(0)));
            EXPECT_NEAR(signal, 1.0, 1e-10);
            double leak = 0.0;
            for (int i = 1; i <= k; ++i)
                leak += std::norm(combiner->w.dot(h.col(i)));
            EXPECT_LE(leak, 1e-10 * signal) << "M=" << m << " K=" << k;
        }
}

TEST(Receivers, UnitaryInvariance)
{
    for (int m : {4, 16, 40})
    {
        RngStream rng(12, static_cast<std::uint64_t>(m));
        const ChannelMatrix h = gen_channels(rng, IidRayleigh{}, m, 4);
        const Eigen::MatrixXcd u = random_unitary(m, 99 + static_cast<std::uint64_t>(m));
        const ChannelMatrix rotated = u * h;
        PreambleAssignment a;
        a.groups = {{1, 3}, {2}};
        const double cb = cb_sinr(h, 1.3);
        EXPECT_NEAR(cb_sinr(rotated, 1.3), cb, 1e-10 * cb);
        const double zf = *zf_sinr(h, estimate_basis(h, a), 1.3);
        EXPECT_NEAR(*zf_sinr(rotated, estimate_basis(rotated, a), 1.3), zf, 1e-10 * zf);
    }
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

TEST(Trials, OutcomeInvariants)
{
    const auto s = point(8, 4, 2, 12, 1.0, 2.0);
    for (auto kind : {BeamformerKind::CB, BeamformerKind::ZF})
    {
        const TrialRunner runner(s, IidRayleigh{}, kind, AccessMode::Random);
        for (std::uint64_t i = 0; i < 3000; ++i)
        {
            const auto out = runner.run(77, i);
            if (out.tagged_collided)
            {
                EXPECT_FALSE(out.success);
            }
            if (out.success)
            {
                EXPECT_GE(out.sinr, s.sinr_threshold);
            }
            EXPECT_LE(out.groups, out.contenders);
        }
    }
}

TEST(Trials, LoneUeZfMatchesNoiseOnlyLaw)
{
    const auto s = point(4, 64, 10, 1, 1.0, 2.5);
    const auto est = run_trials(s, IidRayleigh{}, BeamformerKind::ZF, AccessMode::Random, 100000, 2024);
    const double q = specfun::regularized_upper_gamma_int(4, 2.5);
    EXPECT_NEAR(est.p_hat, q, 3.0 * est.std_error);
    EXPECT_EQ(est.p_hat, static_cast<double>(est.success_count) / est.trials);
    EXPECT_DOUBLE_EQ(est.std_error, std::sqrt(est.p_hat * (1.0 - est.p_hat) / est.trials));
}

TEST(Trials, SinglePreambleOnlySurvivesAlone)
{
    const auto s = point(16, 1, 10, 11);
    const auto est = run_trials(s, IidRayleigh{}, BeamformerKind::CB, AccessMode::Random, 100000, 5);
    EXPECT_NEAR(est.p_hat, analytic::single_antenna_success(11, 10), 3.0 * est.std_error);
}

TEST(Trials, UnlimitedPoolFixedLoadZf)
{
    // C = 1 and N_a = 5 fix K = 4; with no preamble sharing S = K.
    const auto s = point(50, 1, 1, 5);
    const auto est = run_trials(s, IidRayleigh{}, BeamformerKind::ZF, AccessMode::InfiniteP, 100000, 6);
    EXPECT_NEAR(est.p_hat, specfun::regularized_upper_gamma_int(46, kGamma8dB), 3.0 * est.std_error + 1e-12);
}

TEST(Trials, ModesAgreeWithClosedForms)
{
    // small arrays keep the success probability away from 1 so the
    // comparison has power
    const auto s = point(10, 16, 10, 40, 1.0, db_to_linear(3.0));
    const std::uint64_t n = 40000;
    struct Case
    {
        BeamformerKind kind;
        AccessMode mode;
        double expected;
    };
    for (const Case c : {
             Case{BeamformerKind::ZF, AccessMode::Random, analytic::zf_success(s)},
             Case{BeamformerKind::ZF, AccessMode::Eud, analytic::eud_success(s, BeamformerKind::ZF)},
             Case{BeamformerKind::ZF, AccessMode::InfiniteP, analytic::no_collision_success(s, BeamformerKind::ZF)},
         })
    {
        const auto est = run_trials(s, IidRayleigh{}, c.kind, c.mode, n, 31);
        EXPECT_NEAR(est.p_hat, c.expected, 4.0 * est.std_error) << to_string(c.mode);
    }
}

TEST(Trials, SingleAntennaMode)
{
    for (auto [n_a, c] : {std::pair{2, 2}, std::pair{11, 10}, std::pair{50, 10}})
    {
        const auto est = run_trials(point(1, 64, c, n_a), IidRayleigh{}, BeamformerKind::CB,
                                    AccessMode::SingleAntenna, 100000, 8);
        EXPECT_NEAR(est.p_hat, analytic::single_antenna_success(n_a, c), 3.0 * est.std_error);
    }
}

TEST(Trials, GuaranteedCollisionGivesZero)
{
    const auto est = run_trials(point(8, 1, 1, 2), IidRayleigh{}, BeamformerKind::ZF, AccessMode::Random, 1000, 1);
    EXPECT_EQ(est.success_count, 0u);
}

TEST(Trials, IllConditionedBasisCountsAsFailure)
{
    CorrelatedRayleigh model;
    model.num_paths = 1;
    // two single-path UEs are almost never separable exactly, but a
    // singular basis must never abort the run
    const auto s = point(4, 1000, 1, 3, 1.0, 1.0);
    EXPECT_NO_THROW(run_trials(s, model, BeamformerKind::ZF, AccessMode::InfiniteP, 2000, 3));
    // identical columns cannot be inverted
    ChannelMatrix twin(4, 3);
    twin.setOnes();
    EXPECT_FALSE(zf_combiner(estimate_basis(twin, singletons(2))));
}

TEST(Trials, DeterministicAcrossThreadCounts)
{
    const auto s = point(20, 32, 10, 60);
    for (auto kind : {BeamformerKind::CB, BeamformerKind::ZF})
    {
        const auto one = run_trials(s, CorrelatedRayleigh{}, kind, AccessMode::Random, 3001, 99, 1);
        for (unsigned threads : {2u, 3u, 7u})
        {
            const auto many = run_trials(s, CorrelatedRayleigh{}, kind, AccessMode::Random, 3001, 99, threads);
            EXPECT_EQ(one.success_count, many.success_count) << threads;
        }
    }
}

TEST(Trials, RejectsBadArguments)
{
    EXPECT_THROW(run_trials(point(8, 4, 3, 10), IidRayleigh{}, BeamformerKind::CB, AccessMode::Eud, 10, 1),
                 std::invalid_argument);
    EXPECT_THROW(run_trials(point(8, 4, 2, 10), IidRayleigh{}, BeamformerKind::CB, AccessMode::Random, 0, 1),
                 std::invalid_argument);
    EXPECT_THROW(run_trials(point(0, 4, 2, 10), IidRayleigh{}, BeamformerKind::CB, AccessMode::Random, 10, 1),
                 std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

TEST(Diagnostics, BalancedGroups)
{
    const auto a = balanced_assignment(7, 3);
    ASSERT_EQ(a.num_groups(), 3);
    EXPECT_EQ(a.groups[0].size(), 3u);
    EXPECT_EQ(a.groups[1].size(), 2u);
    EXPECT_EQ(a.groups[2].size(), 2u);
}

TEST(Diagnostics, SignalGainIsErlang)
{
    for (auto [m, s] : {std::pair{50, 3}, std::pair{100, 5}, std::pair{200, 10}})
    {
        const auto samples = collect_diagnostics(m, IidRayleigh{}, s, s, 10000, 21);
        std::vector<double> u;
        for (const auto &d : samples)
        {
            u.push_back(d.u_1);
            EXPECT_EQ(d.z_val, 0.0);
        }
        EXPECT_LT(stats::ks_distance(u, [&](double x) { return oracle::gamma_cdf(m - s, x); }), 0.02)
            << "M=" << m << " S=" << s;
        const auto mean = stats::sample_mean(u);
        EXPECT_NEAR(mean.mean, m - s, 3.0 * mean.std_error);
    }
}

TEST(Diagnostics, InterferenceMeanAndSingleInterferer)
{
    for (int k : {1, 4, 10})
    {
        const auto samples = collect_diagnostics(100, IidRayleigh{}, k, 1, 10000, 22);
        std::vector<double> y;
        for (const auto &d : samples)
            y.push_back(d.y_k);
        const auto mean = stats::sample_mean(y);
        EXPECT_NEAR(mean.mean, k, 3.0 * mean.std_error) << "K=" << k;
        if (k == 1)
        {
            EXPECT_LT(stats::ks_distance(y, [](double x) { return 1.0 - std::exp(-x); }), 0.02);
        }
    }
}

TEST(Diagnostics, ResidualInterferenceIsGamma)
{
    const int m = 50, k = 6, s = 3;
    const auto samples = collect_diagnostics(m, IidRayleigh{}, k, s, 10000, 23);
    std::vector<double> z;
    for (const auto &d : samples)
        z.push_back(d.z_val);
    EXPECT_LT(stats::ks_distance(z, [&](double x) { return oracle::gamma_cdf(k - s, x); }), 0.02);
}

TEST(Diagnostics, RejectsInfeasibleShapes)
{
    EXPECT_THROW(collect_diagnostics(10, IidRayleigh{}, 2, 3, 10, 1), std::invalid_argument);
    EXPECT_THROW(collect_diagnostics(4, IidRayleigh{}, 6, 4, 10, 1), std::invalid_argument);
    EXPECT_THROW(collect_diagnostics(4, IidRayleigh{}, 2, 0, 10, 1), std::invalid_argument);
    EXPECT_EQ(collect_diagnostics(4, IidRayleigh{}, 0, 0, 10, 1).size(), 10u);
}
