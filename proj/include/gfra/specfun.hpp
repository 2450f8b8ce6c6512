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

#ifndef GFRA_SPECFUN_HPP
#define GFRA_SPECFUN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfra::specfun
{

namespace detail
{
inline constexpr std::size_t kLogFactorialTableSize = 1024;

inline const std::array<double, kLogFactorialTableSize> &log_factorial_table()
{
    static const auto table = [] {
        std::array<double, kLogFactorialTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::size_t n = 1; n < kLogFactorialTableSize; ++n)
        {
            acc += std::log(static_cast<long double>(n));
            t[n] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}
} // namespace detail

// ln(n!)
inline double log_factorial(std::uint64_t n)
{
    if (n < detail::kLogFactorialTableSize)
        return detail::log_factorial_table()[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// ln C(n, k), requires k <= n
inline double log_binomial_coefficient(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        throw std::invalid_argument("log_binomial_coefficient: k > n");
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Binomial probability mass B(k; n, p), evaluated in the log domain.
inline double binomial_pmf(std::uint64_t k, std::uint64_t n, double p)
{
    if (k > n)
        throw std::invalid_argument("binomial_pmf: k must not exceed n");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("binomial_pmf: p must lie in [0,1]");
    if (p == 0.0)
        return k == 0 ? 1.0 : 0.0;
    if (p == 1.0)
        return k == n ? 1.0 : 0.0;
    const double log_pmf = log_binomial_coefficient(n, k) + static_cast<double>(k) * std::log(p) +
                           static_cast<double>(n - k) * std::log1p(-p);
    return std::exp(log_pmf);
}

/// Both tails of the regularized incomplete gamma function at integer shape.
///
/// For integer s, Q(s,x) = e^{-x} sum_{k<s} x^k/k! is the probability that a
/// Poisson(x) variable is below s, and P(s,x) = 1 - Q(s,x). The smaller of the
/// two tails is summed directly (log-domain terms, largest first) and the other
/// one is taken as its complement, so both are accurate to a few ulps in
/// absolute terms and the small one keeps full relative accuracy.
struct GammaTails
{
    double lower; // P(s, x)
    double upper; // Q(s, x)
};

inline GammaTails regularized_gamma_int(std::uint64_t s, double x)
{
    if (s == 0)
        throw std::invalid_argument("regularized_gamma_int: shape must be >= 1");
    if (!(x >= 0.0))
        throw std::invalid_argument("regularized_gamma_int: x must be >= 0");
    if (x == 0.0)
        return {0.0, 1.0};
    if (std::isinf(x))
        return {1.0, 0.0};

    const double log_x = std::log(x);
    const double sd = static_cast<double>(s);
    constexpr double eps = std::numeric_limits<double>::epsilon() * 0.25;

    if (x < sd)
    {
        // Lower tail: sum_{k>=s} e^{-x} x^k / k!, terms strictly decreasing.
        double term = std::exp(-x + sd * log_x - log_factorial(s));
        double sum = 0.0;
        for (std::uint64_t k = s; term > 0.0; ++k)
        {
            sum += term;
            if (term <= eps * sum)
                break;
            term *= x / static_cast<double>(k + 1);
        }
        const double lower = std::min(sum, 1.0);
        return {lower, 1.0 - lower};
    }

    // Upper tail: sum_{k<s}, the largest term is k = s-1; walk downwards.
    double term = std::exp(-x + (sd - 1.0) * log_x - log_factorial(s - 1));
    double sum = 0.0;
    for (std::uint64_t k = s - 1;; --k)
    {
        sum += term;
        if (k == 0 || term <= eps * sum)
            break;
        term *= static_cast<double>(k) / x;
    }
    const double upper = std::min(sum, 1.0);
    return {1.0 - upper, upper};
}

/// Q(s,x) = Gamma(s,x)/Gamma(s) for integer s >= 1.
inline double regularized_upper_gamma_int(std::uint64_t s, double x)
{
    return regularized_gamma_int(s, x).upper;
}

/// P(s,x) = 1 - Q(s,x) for integer s >= 1.
inline double regularized_lower_gamma_int(std::uint64_t s, double x)
{
    return regularized_gamma_int(s, x).lower;
}

/// Q(s,x) for s = 0..s_max (entry 0 is Q(0,x) = 0), built with the upward
/// recurrence Q(s+1,x) = Q(s,x) + e^{-x} x^s / s!. All increments are
/// nonnegative, so the ladder is monotone by construction.
inline std::vector<double> upper_gamma_ladder(std::uint64_t s_max, double x)
{
    if (!(x >= 0.0))
        throw std::invalid_argument("upper_gamma_ladder: x must be >= 0");
    std::vector<double> q(s_max + 1, 0.0);
    if (s_max == 0)
        return q;
    if (x == 0.0)
    {
        std::fill(q.begin() + 1, q.end(), 1.0);
        return q;
    }
    const double log_x = std::log(x);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < s_max; ++s)
    {
        acc += std::exp(-x + static_cast<double>(s) * log_x - log_factorial(s));
        q[s + 1] = std::min(acc, 1.0);
    }
    return q;
}

/// Probabilities q(k,s) that k contenders, each drawing one of P preambles
/// uniformly, avoid the tagged UE's preamble and occupy exactly s distinct
/// other preambles. Filled by the forward recurrence
///   q(k,s) = q(k-1,s) * s/P + q(k-1,s-1) * (P-s)/P,   q(0,0) = 1,
/// which only ever adds nonnegative products. `Real` may be an exact rational
/// type; the library itself uses double.
template <class Real>
class BasicOccupancyTable
{
public:
    BasicOccupancyTable(std::uint64_t max_contenders, std::uint64_t pool_size)
        : max_contenders_(max_contenders), pool_size_(pool_size),
          width_(std::min(max_contenders, pool_size > 0 ? pool_size - 1 : 0) + 1)
    {
        if (pool_size == 0)
            throw std::invalid_argument("OccupancyTable: pool size must be >= 1");
        table_.assign((max_contenders_ + 1) * width_, Real(0));
        const Real pool(pool_size_);
        at(0, 0) = Real(1);
        for (std::uint64_t k = 1; k <= max_contenders_; ++k)
        {
            const std::uint64_t s_hi = max_groups(k);
            for (std::uint64_t s = 0; s <= s_hi; ++s)
            {
                Real v(0);
                if (s <= max_groups(k - 1))
                    v += at(k - 1, s) * Real(s) / pool;
                if (s >= 1)
                    v += at(k - 1, s - 1) * Real(pool_size_ - s) / pool;
                at(k, s) = v;
            }
        }
    }

    std::uint64_t max_contenders() const noexcept { return max_contenders_; }
    std::uint64_t pool_size() const noexcept { return pool_size_; }

    // largest admissible s for k contenders: min(k, P-1)
    std::uint64_t max_groups(std::uint64_t k) const noexcept { return std::min(k, pool_size_ - 1); }

    const Real &operator()(std::uint64_t k, std::uint64_t s) const
    {
        if (k > max_contenders_)
            throw std::out_of_range("OccupancyTable: k beyond table");
        if (s > max_groups(k))
            throw std::out_of_range("OccupancyTable: s exceeds min(k, P-1)");
        return table_[k * width_ + s];
    }

private:
    Real &at(std::uint64_t k, std::uint64_t s) { return table_[k * width_ + s]; }

    std::uint64_t max_contenders_;
    std::uint64_t pool_size_;
    std::uint64_t width_;
    std::vector<Real> table_;
};

using OccupancyTable = BasicOccupancyTable<double>;

/// Probability that K contenders select exactly S distinct preambles, none of
/// them the tagged UE's, out of a pool of P.
inline double occupancy_no_tag_collision(std::uint64_t contenders, std::uint64_t groups,
                                         std::uint64_t pool_size)
{
    if (pool_size == 0)
        throw std::invalid_argument("occupancy_no_tag_collision: pool size must be >= 1");
    if (groups > std::min(contenders, pool_size - 1))
        throw std::invalid_argument("occupancy_no_tag_collision: S must not exceed min(K, P-1)");
    return OccupancyTable(contenders, pool_size)(contenders, groups);
}

} // namespace gfra::specfun

#endif
