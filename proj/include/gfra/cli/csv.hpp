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

#ifndef GFRA_CLI_CSV_HPP
#define GFRA_CLI_CSV_HPP

// Locale-independent CSV output. Numbers use std::to_chars, so doubles are
// written in their shortest round-trip form with '.' as decimal separator.

#include "../mcsim/trials.hpp"
#include "sweep.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace gfra::cli
{

inline constexpr std::array<std::string_view, 15> kResultColumns{
    "M", "C", "P", "N_a", "eta", "rho_db", "gamma_th_db", "beamformer", "channel_model", "mode",
    "analytic", "mc_estimate", "mc_stderr", "trials", "seed"};

inline constexpr std::array<std::string_view, 4> kDiagnosticColumns{"sample_index", "y_k", "u_1", "z_val"};

template <class T>
std::string format_number(T value)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (res.ec != std::errc{})
        throw std::runtime_error("format_number: conversion failed");
    return std::string(buf.data(), res.ptr);
}

template <class T>
std::string format_optional(const std::optional<T> &value)
{
    return value ? format_number(*value) : std::string{};
}

/// RFC 4180 field quoting.
inline std::string quote_field(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter
{
public:
    explicit CsvWriter(std::ostream &os) : os_(os) {}

    template <class Range>
    void write_record(const Range &fields)
    {
        bool first = true;
        for (const auto &f : fields)
        {
            if (!first)
                os_ << ',';
            os_ << quote_field(f);
            first = false;
        }
        os_ << '\n';
    }

private:
    std::ostream &os_;
};

inline std::vector<std::string> to_fields(const ResultRow &r)
{
    return {format_number(r.antennas),
            format_number(r.channels),
            format_number(r.preambles),
            format_number(r.active_ues),
            format_number(r.eta),
            format_number(r.rho_db),
            format_number(r.gamma_th_db),
            r.beamformer,
            r.channel_model,
            r.mode,
            format_optional(r.analytic),
            format_optional(r.mc_estimate),
            format_optional(r.mc_stderr),
            format_optional(r.trials),
            format_optional(r.seed)};
}

inline void write_results(std::ostream &os, const std::vector<ResultRow> &rows)
{
    CsvWriter w(os);
    w.write_record(kResultColumns);
    for (const auto &r : rows)
        w.write_record(to_fields(r));
}

inline void write_diagnostics(std::ostream &os, const std::vector<mcsim::DiagnosticSample> &samples)
{
    CsvWriter w(os);
    w.write_record(kDiagnosticColumns);
    for (std::size_t i = 0; i < samples.size(); ++i)
        w.write_record(std::array<std::string, 4>{format_number(i), format_number(samples[i].y_k),
                                                  format_number(samples[i].u_1), format_number(samples[i].z_val)});
}

} // namespace gfra::cli

#endif
