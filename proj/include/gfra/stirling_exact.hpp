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

#ifndef GFRA_STIRLING_EXACT_HPP
#define GFRA_STIRLING_EXACT_HPP

// Exact-arithmetic occupancy formula. Only meant for small instances: this is
// the reference the floating-point recurrence in specfun.hpp is checked against.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gfra::specfun
{

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Stirling number of the second kind {K, S}.
inline BigInt stirling2_exact(unsigned contenders, unsigned groups)
{
    if (groups > contenders)
        return 0;
    // row[s] holds {k, s} while k sweeps 0..K
    std::vector<BigInt> row(groups + 1, 0);
    row[0] = 1;
    for (unsigned k = 1; k <= contenders; ++k)
    {
        const unsigned s_hi = k < groups ? k : groups;
        for (unsigned s = s_hi; s >= 1; --s)
            row[s] = BigInt(s) * row[s] + row[s - 1];
        row[0] = 0;
    }
    return row[groups];
}

inline BigInt binomial_exact(unsigned n, unsigned k)
{
    if (k > n)
        return 0;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline BigInt factorial_exact(unsigned n)
{
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i)
        r *= i;
    return r;
}

/// C(P-1, S) * S! * {K, S} / P^K as an exact rational.
inline BigRational occupancy_exact(unsigned contenders, unsigned groups, unsigned pool_size)
{
    if (pool_size == 0)
        throw std::invalid_argument("occupancy_exact: pool size must be >= 1");
    BigInt numerator = binomial_exact(pool_size - 1, groups) * factorial_exact(groups) *
                       stirling2_exact(contenders, groups);
    BigInt denominator = boost::multiprecision::pow(BigInt(pool_size), contenders);
    return BigRational(numerator, denominator);
}

} // namespace gfra::specfun

#endif
