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

#ifndef GFRA_ANALYTIC_HPP
#define GFRA_ANALYTIC_HPP

// Closed-form success probabilities of grant-free random access with
// conjugate (CB) and zero-forcing (ZF) receive beamforming, their upper
// bounds, and the load-based comparison metrics built on top of them.
//
// All SINR and SNR arguments are linear. Success is the joint event "tagged
// UE's preamble not shared" and "post-beamforming SINR >= threshold".

#include "params.hpp"
#include "specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gfra::analytic
{

/// Remaining binomial mass below which the sum over the number of cochannel
/// contenders is cut off. Every other factor of each term is <= 1.
inline constexpr double kBinomialTailMass = 1e-12;

namespace detail
{
inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
} // namespace detail

/// Probabilities B(K; N_a-1, 1/C) that exactly K other UEs share the tagged
/// UE's channel, for K = 0..K_cut where the untouched tail mass is below
/// kBinomialTailMass.
inline std::vector<double> cochannel_weights(int active_ues, int channels)
{
    if (active_ues < 1 || channels < 1)
        throw std::invalid_argument("cochannel_weights: N_a and C must be >= 1");
    const auto n = static_cast<std::uint64_t>(active_ues - 1);
    const double p = 1.0 / channels;
    std::vector<double> w;
    double mass = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k)
    {
        const double b = specfun::binomial_pmf(k, n, p);
        w.push_back(b);
        mass += b;
        if (1.0 - mass < kBinomialTailMass)
            break;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Conjugate beamforming
// ---------------------------------------------------------------------------

/// Parameters of the approximate density of the normalized interference
/// Y_K = (1/M) sum_i |h_1^H h_i|^2 for K >= 1 cochannel contenders.
struct CbPdfParams
{
    double beta;    // sqrt(M) / (sqrt(M) + K - 1)
    double pdf_eta; // K / (sqrt(M) + K - 1)
    double lambda;  // M / gamma_Th - 1 / rho_R

    static CbPdfParams make(int antennas, int contenders, double sinr_threshold, double uplink_snr)
    {
        if (antennas < 1 || contenders < 1)
            throw std::invalid_argument("CbPdfParams: requires M >= 1 and K >= 1");
        const double root_m = std::sqrt(static_cast<double>(antennas));
        const double denom = root_m + contenders - 1.0;
        return {root_m / denom, contenders / denom, antennas / sinr_threshold - 1.0 / uplink_snr};
    }
};

/// P(Y_K > y) under the Gamma-mixture approximation of the interference law.
///
/// Writing c = sqrt(M)/(sqrt(M)-1), the density
///   f(y) = beta eta^{1-K} [e^{-beta y} - e^{-c y} sum_{n<=K-2} (c eta y)^n / n!]
/// equals beta eta^{1-K} e^{-beta y} P(K-1, c eta y) because c - beta = c eta,
/// and integrating term by term gives the all-positive series
///   P(Y_K > y) = (1 - eta) sum_{m>=0} eta^m Q(K+m, c y).
/// This is algebraically identical to the alternating finite form but has no
/// cancellation between eta^{1-K}-sized terms.
inline double cb_interference_tail(int antennas, int contenders, double y)
{
    if (antennas < 1 || contenders < 0)
        throw std::invalid_argument("cb_interference_tail: requires M >= 1 and K >= 0");
    if (y < 0.0)
        return 1.0;
    if (contenders == 0)
        return 0.0;
    if (contenders == 1)
        return std::exp(-y);
    if (antennas == 1)
        return std::exp(-y / contenders); // c -> infinity, eta -> 1 limit

    const double root_m = std::sqrt(static_cast<double>(antennas));
    const double eta = contenders / (root_m + contenders - 1.0);
    const double x = root_m / (root_m - 1.0) * y;
    if (x == 0.0)
        return 1.0;

    const double log_x = std::log(x);
    auto n = static_cast<std::uint64_t>(contenders);
    double q = specfun::regularized_upper_gamma_int(n, x);
    double power = 1.0; // eta^m
    double acc = 0.0;
    constexpr double kNegligible = 1e-18;
    for (int iter = 0; iter < 10'000'000; ++iter)
    {
        acc += power * q;
        power *= eta;
        if (power < kNegligible)
            break;
        if (1.0 - q < kNegligible)
        {
            acc += power / (1.0 - eta); // every later Q is 1 to working precision
            break;
        }
        q = std::min(1.0, q + std::exp(-x + static_cast<double>(n) * log_x - specfun::log_factorial(n)));
        ++n;
    }
    return detail::clamp01((1.0 - eta) * acc);
}

inline double cb_interference_cdf(int antennas, int contenders, double y)
{
    return 1.0 - cb_interference_tail(antennas, contenders, y);
}

/// P(gamma_CB >= gamma_Th | K) with gamma_CB = rho M / (1 + rho Y_K).
/// Zero when gamma_Th > M rho (no interference level can satisfy it).
inline double cb_conditional_success(int antennas, int contenders, double sinr_threshold, double uplink_snr)
{
    if (antennas < 1 || contenders < 0)
        throw std::invalid_argument("cb_conditional_success: requires M >= 1 and K >= 0");
    const double lambda = antennas / sinr_threshold - 1.0 / uplink_snr;
    if (lambda < 0.0)
        return 0.0;
    if (contenders == 0)
        return 1.0;
    return detail::clamp01(1.0 - cb_interference_tail(antennas, contenders, lambda));
}

/// Success probability with CB and random channel selection.
inline double cb_success(const SystemParams &params)
{
    params.validate();
    const auto weights = cochannel_weights(params.active_ues, params.channels);
    const double no_collision = 1.0 - 1.0 / params.preambles;
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
    {
        if (weights[k] == 0.0)
            continue;
        const double avoid = std::pow(no_collision, static_cast<double>(k));
        if (avoid == 0.0)
            continue;
        total += weights[k] * avoid *
                 cb_conditional_success(params.antennas, static_cast<int>(k), params.sinr_threshold,
                                        params.uplink_snr);
    }
    return detail::clamp01(total);
}

// ---------------------------------------------------------------------------
// Zero-forcing beamforming
// ---------------------------------------------------------------------------

namespace detail
{
/// ZF conditional success for K > S given the ladder Q(s, gamma/rho),
/// s = 0..n, with n = M - S and d = K - S.
///
/// The double sum over (p, q) collapses over p because
///   sum_{p=q}^{n-1} C(p,q) gamma^p rho^{q-p} / p! = (gamma^q / q!) e^{gamma/rho} Q(n-q, gamma/rho),
/// leaving sum_q NB(q; d, gamma/(1+gamma)) Q(n-q, gamma/rho) with NB the
/// negative-binomial mass. Every term is nonnegative.
inline double zf_conditional_from_ladder(std::uint64_t n, std::uint64_t d, double sinr_threshold,
                                         const std::vector<double> &ladder)
{
    const double log_r = std::log(sinr_threshold) - std::log1p(sinr_threshold);
    const double log_nb0 = -static_cast<double>(d) * std::log1p(sinr_threshold);
    std::vector<double> terms;
    terms.reserve(n);
    double log_nb = log_nb0; // q = 0
    for (std::uint64_t q = 0; q < n; ++q)
    {
        if (q > 0)
            log_nb += std::log(static_cast<double>(d + q - 1)) - std::log(static_cast<double>(q)) + log_r;
        terms.push_back(std::exp(log_nb) * ladder[n - q]);
    }
    std::sort(terms.begin(), terms.end(), std::greater<>());
    double sum = 0.0;
    for (double t : terms)
        sum += t;
    return clamp01(sum);
}
} // namespace detail

/// P(gamma_ZF >= gamma_Th | K, S): U ~ Erlang(M-S, 1) signal gain and, when
/// K > S, Z ~ Gamma(K-S, 1) residual intra-group interference,
/// gamma_ZF = rho U / (rho Z + 1). Zero when S + 1 > M.
inline double zf_conditional_success(int antennas, int contenders, int groups, double sinr_threshold,
                                     double uplink_snr)
{
    if (antennas < 1 || contenders < 0 || groups < 0)
        throw std::invalid_argument("zf_conditional_success: negative argument");
    if (groups > contenders)
        throw std::invalid_argument("zf_conditional_success: S must not exceed K");
    if (groups + 1 > antennas)
        return 0.0;
    const auto n = static_cast<std::uint64_t>(antennas - groups);
    const double x = sinr_threshold / uplink_snr;
    if (contenders == groups)
        return specfun::regularized_upper_gamma_int(n, x);
    const auto ladder = specfun::upper_gamma_ladder(n, x);
    return detail::zf_conditional_from_ladder(n, static_cast<std::uint64_t>(contenders - groups), sinr_threshold,
                                              ladder);
}

namespace detail
{
/// sum_S occupancy(K,S,P) * P(gamma_ZF >= gamma_Th | K,S) for fixed K.
/// For K = 0 the lone-UE term occupancy(0,0,P) = 1 is included.
inline double zf_collision_free_mass(const SystemParams &params, const specfun::OccupancyTable &occupancy,
                                     const std::vector<double> &ladder, std::uint64_t contenders)
{
    const double x = params.sinr_threshold / params.uplink_snr;
    const auto m = static_cast<std::uint64_t>(params.antennas);
    if (contenders == 0)
        return specfun::regularized_upper_gamma_int(m, x);
    double inner = 0.0;
    const std::uint64_t s_hi = occupancy.max_groups(contenders);
    for (std::uint64_t s = 1; s <= s_hi; ++s)
    {
        if (s + 1 > m)
            break;
        const double weight = occupancy(contenders, s);
        if (weight == 0.0)
            continue;
        const std::uint64_t n = m - s;
        const double cond = contenders == s ? ladder[n]
                                            : zf_conditional_from_ladder(n, contenders - s,
                                                                         params.sinr_threshold, ladder);
        inner += weight * cond;
    }
    return inner;
}
} // namespace detail

/// Success probability with ZF and random channel selection.
inline double zf_success(const SystemParams &params)
{
    params.validate();
    const auto weights = cochannel_weights(params.active_ues, params.channels);
    const specfun::OccupancyTable occupancy(weights.size() - 1, static_cast<std::uint64_t>(params.preambles));
    const auto ladder = specfun::upper_gamma_ladder(static_cast<std::uint64_t>(params.antennas),
                                                    params.sinr_threshold / params.uplink_snr);
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
    {
        if (weights[k] == 0.0)
            continue;
        total += weights[k] * detail::zf_collision_free_mass(params, occupancy, ladder, k);
    }
    return detail::clamp01(total);
}

inline double success(const SystemParams &params, BeamformerKind kind)
{
    return kind == BeamformerKind::CB ? cb_success(params) : zf_success(params);
}

// ---------------------------------------------------------------------------
// Upper bounds and baselines
// ---------------------------------------------------------------------------

/// Success probability when every channel carries exactly eta = N_a/C UEs.
inline double eud_success(const SystemParams &params, BeamformerKind kind)
{
    params.validate();
    if (!params.integer_load())
        throw std::invalid_argument("eud_success: load N_a/C must be an integer");
    const int contenders = params.active_ues / params.channels - 1;
    if (kind == BeamformerKind::CB)
    {
        const double avoid = std::pow(1.0 - 1.0 / params.preambles, contenders);
        if (avoid == 0.0)
            return 0.0;
        return detail::clamp01(avoid * cb_conditional_success(params.antennas, contenders, params.sinr_threshold,
                                                               params.uplink_snr));
    }
    const auto k = static_cast<std::uint64_t>(contenders);
    const specfun::OccupancyTable occupancy(k, static_cast<std::uint64_t>(params.preambles));
    const auto ladder = specfun::upper_gamma_ladder(static_cast<std::uint64_t>(params.antennas),
                                                    params.sinr_threshold / params.uplink_snr);
    return detail::clamp01(detail::zf_collision_free_mass(params, occupancy, ladder, k));
}

/// Success probability with random channel selection but no preamble
/// collisions at all (an unlimited preamble pool).
inline double no_collision_success(const SystemParams &params, BeamformerKind kind)
{
    params.validate();
    const auto weights = cochannel_weights(params.active_ues, params.channels);
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
    {
        if (weights[k] == 0.0)
            continue;
        const int kk = static_cast<int>(k);
        const double cond =
            kind == BeamformerKind::CB
                ? cb_conditional_success(params.antennas, kk, params.sinr_threshold, params.uplink_snr)
                : zf_conditional_success(params.antennas, kk, kk, params.sinr_threshold, params.uplink_snr);
        total += weights[k] * cond;
    }
    return detail::clamp01(total);
}

/// Large-array limit of the even-distribution success probability,
/// (1 - 1/P)^(eta - 1), identical for CB and ZF.
inline double eud_limit(int preambles, int load)
{
    if (preambles < 1)
        throw std::invalid_argument("eud_limit: P must be >= 1");
    if (load < 1)
        throw std::invalid_argument("eud_limit: eta must be >= 1");
    return std::pow(1.0 - 1.0 / preambles, load - 1);
}

/// Deterministic equivalent of the CB SINR under an even distribution.
inline double cb_asymptotic_sinr(int antennas, int load, double uplink_snr)
{
    if (antennas < 1 || load < 1 || !(uplink_snr > 0.0))
        throw std::invalid_argument("cb_asymptotic_sinr: requires M >= 1, eta >= 1, rho > 0");
    const double eta = load;
    const double v = uplink_snr / (1.0 + uplink_snr * (eta - 1.0) / eta);
    return antennas / eta * v;
}

/// Single-antenna (slotted ALOHA) baseline: the tagged UE must be alone on
/// its channel.
inline double single_antenna_success(int active_ues, int channels)
{
    if (active_ues < 1 || channels < 1)
        throw std::invalid_argument("single_antenna_success: N_a and C must be >= 1");
    return std::pow(1.0 - 1.0 / channels, active_ues - 1);
}

/// Single-antenna baseline under an even distribution: only a lone UE per
/// channel survives.
inline double single_antenna_eud_success(int load)
{
    if (load < 1)
        throw std::invalid_argument("single_antenna_eud_success: eta must be >= 1");
    return load == 1 ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------
// Load-based metrics
// ---------------------------------------------------------------------------

struct LoadPoint
{
    double eta;
    double value;
};

/// Largest load whose success probability still meets `target`, reading a
/// curve sampled on an increasing load grid and interpolating linearly between
/// the two samples that bracket the crossing. Returns the first grid load if
/// the curve starts below target and the last one if it never drops below.
///
/// Throws std::domain_error when the curve rises by more than
/// `monotone_tolerance` between consecutive samples.
inline double eta_at_target(std::span<const LoadPoint> curve, double target, double monotone_tolerance = 1e-9)
{
    if (curve.empty())
        throw std::invalid_argument("eta_at_target: empty curve");
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("eta_at_target: target must lie in (0,1)");
    for (std::size_t i = 1; i < curve.size(); ++i)
    {
        if (!(curve[i].eta > curve[i - 1].eta))
            throw std::invalid_argument("eta_at_target: load grid must be strictly increasing");
        if (curve[i].value > curve[i - 1].value + monotone_tolerance)
            throw std::domain_error("eta_at_target: curve increases between eta=" +
                                    std::to_string(curve[i - 1].eta) + " and eta=" + std::to_string(curve[i].eta));
    }
    if (curve.front().value < target)
        return curve.front().eta;
    for (std::size_t i = 1; i < curve.size(); ++i)
    {
        if (curve[i].value < target)
        {
            const LoadPoint &a = curve[i - 1];
            const LoadPoint &b = curve[i];
            const double t = (a.value - target) / (a.value - b.value);
            return a.eta + t * (b.eta - a.eta);
        }
    }
    return curve.back().eta;
}

/// Convenience overload: evaluates `success_at_load` on `grid` first.
inline double eta_at_target(const std::function<double(double)> &success_at_load, std::span<const double> grid,
                            double target, double monotone_tolerance = 1e-9)
{
    std::vector<LoadPoint> curve;
    curve.reserve(grid.size());
    for (double eta : grid)
        curve.push_back({eta, success_at_load(eta)});
    return eta_at_target(std::span<const LoadPoint>(curve), target, monotone_tolerance);
}

/// Ratio of supportable loads, multi-antenna over single-antenna.
inline double mimo_gain(double eta_multi, double eta_single)
{
    if (!(eta_single > 0.0) || !(eta_multi > 0.0))
        throw std::invalid_argument("mimo_gain: loads must be positive");
    return eta_multi / eta_single;
}

/// Relative load advantage of the even distribution over the random one.
inline double gap_to_eud(double eta_even, double eta_random)
{
    if (!(eta_random > 0.0) || !(eta_even > 0.0))
        throw std::invalid_argument("gap_to_eud: loads must be positive");
    return (eta_even - eta_random) / eta_random;
}

} // namespace gfra::analytic

#endif
