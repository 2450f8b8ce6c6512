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

#ifndef GFRA_CLI_REPRODUCE_HPP
#define GFRA_CLI_REPRODUCE_HPP

// Canned sweeps behind the published figures and the load-metric tables.

#include "../analytic.hpp"
#include "../mcsim/trials.hpp"
#include "csv.hpp"
#include "evaluate.hpp"
#include "sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gfra::cli
{

enum class Target
{
    Fig4,
    Fig5,
    Fig7,
    Fig8,
    Fig10,
    Fig11,
    Fig12,
    Table3,
    Table4
};

inline constexpr std::array<std::pair<Target, std::string_view>, 9> kTargets{{{Target::Fig4, "fig4"},
                                                                               {Target::Fig5, "fig5"},
                                                                               {Target::Fig7, "fig7"},
                                                                               {Target::Fig8, "fig8"},
                                                                               {Target::Fig10, "fig10"},
                                                                               {Target::Fig11, "fig11"},
                                                                               {Target::Fig12, "fig12"},
                                                                               {Target::Table3, "table3"},
                                                                               {Target::Table4, "table4"}}};

inline std::string_view to_string(Target t)
{
    for (const auto &[target, name] : kTargets)
        if (target == t)
            return name;
    return "?";
}

inline Target parse_target(std::string_view s)
{
    for (const auto &[target, name] : kTargets)
        if (name == s)
            return target;
    throw ConfigError("unknown reproduce target '" + std::string(s) + "'");
}

struct ReproduceOptions
{
    int channels = 10;
    std::optional<std::uint64_t> trials; // overrides the per-model defaults
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double target = 0.95;
    double gamma_th_db = 8.0;
    ProgressFn progress;
};

/// One output file of a figure target.
struct Curve
{
    std::string name;
    SweepSpec spec;
};

namespace detail
{
inline std::vector<double> arange(double lo, double hi, double step)
{
    std::vector<double> v;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i)
        v.push_back(lo + i * step);
    return v;
}

inline std::vector<double> integer_loads(int lo, int hi)
{
    std::vector<double> v;
    for (int eta = lo; eta <= hi; ++eta)
        v.push_back(eta);
    return v;
}

inline std::uint64_t figure_trials(const ReproduceOptions &opt, const mcsim::ChannelModel &model, int antennas)
{
    if (opt.trials)
        return *opt.trials;
    if (std::holds_alternative<mcsim::IidRayleigh>(model))
        return 100000;
    return antennas >= 400 ? 20000 : 100000;
}

inline std::string curve_name(std::string_view target, const SweepSpec &s, Mode mode)
{
    std::string name(target);
    if (mode == Mode::SingleAntenna)
        return name + "_single_antenna_P" + std::to_string(s.preambles.front());
    if (mode == Mode::EudLimit)
        return name + "_eud_limit_P" + std::to_string(s.preambles.front());
    return name + "_" + std::string(gfra::to_string(s.beamformer)) + "_" + mcsim::to_string(s.channel) + "_M" +
           std::to_string(s.antennas.front()) + "_P" + std::to_string(s.preambles.front()) + "_" +
           std::string(to_string(mode));
}
} // namespace detail

/// Curves of a figure target, one SweepSpec per output file.
inline std::vector<Curve> figure_curves(Target target, const ReproduceOptions &opt)
{
    const std::string_view tag = to_string(target);
    std::vector<Curve> curves;
    auto add = [&](BeamformerKind kind, const mcsim::ChannelModel &model, int m, int p, Mode mode,
                   std::vector<double> etas, std::vector<double> rho_db, bool analytic, bool mc) {
        SweepSpec s;
        s.antennas = {m};
        s.preambles = {p};
        s.channels = opt.channels;
        s.etas = std::move(etas);
        s.rho_db = std::move(rho_db);
        s.gamma_th_db = opt.gamma_th_db;
        s.beamformer = kind;
        s.channel = model;
        s.modes = {mode};
        s.trials = detail::figure_trials(opt, model, m);
        s.seed = opt.seed;
        s.threads = opt.threads;
        s.run_analytic = analytic;
        s.run_mc = mc && has_simulator(mode);
        curves.push_back({detail::curve_name(tag, s, mode), std::move(s)});
    };

    const mcsim::ChannelModel iid = mcsim::IidRayleigh{};
    const mcsim::ChannelModel corr = mcsim::CorrelatedRayleigh{};
    const auto rho_axis = detail::arange(-10.0, 10.0, 2.0);
    const auto eta_axis = detail::integer_loads(1, 20);

    switch (target)
    {
    case Target::Fig4:
    case Target::Fig7: {
        const auto kind = target == Target::Fig4 ? BeamformerKind::CB : BeamformerKind::ZF;
        for (int m : {50, 100, 200})
            for (int p : {64, 256})
                add(kind, iid, m, p, Mode::Random, {4.0}, rho_axis, true, true);
        break;
    }
    case Target::Fig5:
    case Target::Fig8: {
        const auto kind = target == Target::Fig5 ? BeamformerKind::CB : BeamformerKind::ZF;
        const std::vector<int> arrays = target == Target::Fig5 ? std::vector<int>{100, 200}
                                                               : std::vector<int>{50, 100, 200};
        for (int p : {64, 128, 256})
        {
            for (int m : arrays)
                add(kind, iid, m, p, Mode::Random, eta_axis, {0.0}, true, true);
            add(kind, iid, 200, p, Mode::Eud, eta_axis, {0.0}, true, true);
            add(kind, iid, 200, p, Mode::EudLimit, eta_axis, {0.0}, true, false);
            add(kind, iid, 200, p, Mode::InfiniteP, eta_axis, {0.0}, true, true);
        }
        break;
    }
    case Target::Fig10:
        for (int m : {50, 100, 200, 400})
            add(BeamformerKind::ZF, corr, m, 128, Mode::Random, {4.0}, rho_axis, false, true);
        break;
    case Target::Fig11:
        for (int p : {64, 128, 256})
        {
            add(BeamformerKind::ZF, corr, 400, p, Mode::Random, eta_axis, {0.0}, false, true);
            add(BeamformerKind::ZF, corr, 400, p, Mode::Eud, eta_axis, {0.0}, false, true);
            add(BeamformerKind::ZF, corr, 400, p, Mode::EudLimit, eta_axis, {0.0}, true, false);
        }
        break;
    case Target::Fig12: {
        add(BeamformerKind::ZF, corr, 200, 128, Mode::Random, eta_axis, {0.0}, false, true);
        add(BeamformerKind::ZF, corr, 200, 128, Mode::Eud, eta_axis, {0.0}, false, true);
        std::vector<double> fine;
        for (int n_a = 1; n_a <= 3 * opt.channels; ++n_a)
            fine.push_back(static_cast<double>(n_a) / opt.channels);
        add(BeamformerKind::ZF, iid, 1, 128, Mode::SingleAntenna, fine, {0.0}, true, true);
        break;
    }
    case Target::Table3:
    case Target::Table4:
        throw std::invalid_argument("figure_curves: table targets have no fixed curve set");
    }
    return curves;
}

// ---------------------------------------------------------------------------
// Load metrics at a target success probability
// ---------------------------------------------------------------------------

/// Reference values the table targets are compared against.
inline const std::map<int, double> &reference_gains()
{
    static const std::map<int, double> v{{100, 35.8}, {200, 99.6}, {400, 120.3}};
    return v;
}

inline const std::map<int, double> &reference_gaps()
{
    static const std::map<int, double> v{{1, 19.17}, {50, 0.68}, {100, 0.47}, {200, 0.24}, {400, 0.16}};
    return v;
}

struct LoadSearch
{
    double eta = 0.0;
    std::vector<ResultRow> rows; // the full-precision points used
};

/// Supportable load of a simulated curve at `target`. A cheap scan over
/// integer loads locates the first drop below target; the bracketing loads and
/// one neighbour on each side are then re-estimated with `trials` and read by
/// eta_at_target. Rises smaller than four combined standard errors count as
/// noise.
inline LoadSearch search_simulated_load(const SystemParams &base, const mcsim::ChannelModel &model,
                                        BeamformerKind kind, Mode mode, std::uint64_t trials,
                                        std::uint64_t scan_trials, std::uint64_t seed, unsigned threads,
                                        double target, int max_load, const ProgressFn &progress = {})
{
    auto estimate = [&](int eta, std::uint64_t n) {
        SystemParams p = base;
        p.active_ues = eta * base.channels;
        return mcsim::run_trials(p, model, kind, access_mode(mode), n, seed, threads);
    };
    const std::string label = "M=" + std::to_string(base.antennas) + " mode=" + std::string(to_string(mode));

    int first_below = max_load;
    for (int eta = 1; eta <= max_load; ++eta)
    {
        const double p = estimate(eta, scan_trials).p_hat;
        if (progress)
            progress(0, 0, label + " scan eta=" + std::to_string(eta) + " p=" + std::to_string(p));
        if (p < target)
        {
            first_below = eta;
            break;
        }
    }

    std::map<int, mcsim::McEstimate> fine;
    auto refine = [&](int eta) {
        if (eta < 1 || eta > max_load || fine.count(eta))
            return;
        fine.emplace(eta, estimate(eta, trials));
        if (progress)
            progress(0, 0, label + " eta=" + std::to_string(eta) + " p=" + std::to_string(fine.at(eta).p_hat));
    };
    for (int eta = first_below - 2; eta <= first_below + 1; ++eta)
        refine(eta);
    for (;;)
    {
        const auto &lo = *fine.begin();
        const auto &hi = *std::prev(fine.end());
        if (lo.second.p_hat < target && lo.first > 1)
            refine(lo.first - 1);
        else if (hi.second.p_hat >= target && hi.first < max_load)
            refine(hi.first + 1);
        else
            break;
    }

    LoadSearch out;
    std::vector<analytic::LoadPoint> curve;
    double worst_se = 0.0;
    for (const auto &[eta, est] : fine)
    {
        curve.push_back({static_cast<double>(eta), est.p_hat});
        worst_se = std::max(worst_se, est.std_error);
        ResultRow r;
        r.antennas = base.antennas;
        r.channels = base.channels;
        r.preambles = base.preambles;
        r.active_ues = eta * base.channels;
        r.eta = eta;
        r.rho_db = linear_to_db(base.uplink_snr);
        r.gamma_th_db = linear_to_db(base.sinr_threshold);
        r.beamformer = std::string(gfra::to_string(kind));
        r.channel_model = mcsim::to_string(model);
        r.mode = std::string(to_string(mode));
        r.mc_estimate = est.p_hat;
        r.mc_stderr = est.std_error;
        r.trials = est.trials;
        r.seed = est.seed;
        out.rows.push_back(std::move(r));
    }
    out.eta = analytic::eta_at_target(curve, target, 4.0 * std::sqrt(2.0) * worst_se + 1e-12);
    return out;
}

/// Single-antenna supportable load, read from the closed form on the
/// fractional grid eta = N_a / C, N_a = 1 .. 4C.
inline double single_antenna_load(int channels, double target)
{
    std::vector<analytic::LoadPoint> curve;
    for (int n_a = 1; n_a <= 4 * channels; ++n_a)
        curve.push_back({static_cast<double>(n_a) / channels, analytic::single_antenna_success(n_a, channels)});
    return analytic::eta_at_target(curve, target);
}

/// Single-antenna supportable load under an even distribution (integer loads).
inline double single_antenna_even_load(double target)
{
    std::vector<analytic::LoadPoint> curve;
    for (int eta = 1; eta <= 20; ++eta)
        curve.push_back({static_cast<double>(eta), analytic::single_antenna_eud_success(eta)});
    return analytic::eta_at_target(curve, target);
}

struct TableEntry
{
    int antennas = 0;
    double eta_random = 0.0;
    std::optional<double> eta_even;
};

struct TableReport
{
    int channels = 10;
    int preambles = 128;
    double rho_db = 0.0;
    double target = 0.95;
    double eta_single = 0.0;
    double eta_single_even = 0.0;
    std::vector<TableEntry> entries;
    std::vector<ResultRow> curve_rows;

    const TableEntry &entry(int antennas) const
    {
        for (const auto &e : entries)
            if (e.antennas == antennas)
                return e;
        throw std::out_of_range("no table entry for M=" + std::to_string(antennas));
    }

    double gain(int antennas) const { return analytic::mimo_gain(entry(antennas).eta_random, eta_single); }

    double gap(int antennas) const
    {
        if (antennas == 1)
            return analytic::gap_to_eud(eta_single_even, eta_single);
        const auto &e = entry(antennas);
        if (!e.eta_even)
            throw std::logic_error("no even-distribution load for M=" + std::to_string(antennas));
        return analytic::gap_to_eud(*e.eta_even, e.eta_random);
    }
};

/// Default trial counts for the correlated load searches.
inline std::uint64_t table_trials(const ReproduceOptions &opt, int antennas)
{
    if (opt.trials)
        return *opt.trials;
    return antennas >= 400 ? 20000 : 50000;
}

/// Supportable loads with ZF under correlated fading (P = 128, rho = 0 dB)
/// for every M in `antennas`, plus the single-antenna loads.
inline TableReport compute_tables(const std::vector<int> &antennas, bool with_even, const ReproduceOptions &opt)
{
    TableReport rep;
    rep.channels = opt.channels;
    rep.target = opt.target;
    rep.eta_single = single_antenna_load(opt.channels, opt.target);
    rep.eta_single_even = single_antenna_even_load(opt.target);
    const mcsim::ChannelModel model = mcsim::CorrelatedRayleigh{};
    for (int m : antennas)
    {
        SystemParams base;
        base.antennas = m;
        base.preambles = rep.preambles;
        base.channels = opt.channels;
        base.sinr_threshold = db_to_linear(opt.gamma_th_db);
        base.uplink_snr = db_to_linear(rep.rho_db);
        const std::uint64_t n = table_trials(opt, m);
        const std::uint64_t scan = std::max<std::uint64_t>(2000, n / 10);
        TableEntry e;
        e.antennas = m;
        auto random = search_simulated_load(base, model, BeamformerKind::ZF, Mode::Random, n, scan, opt.seed,
                                            opt.threads, opt.target, 20, opt.progress);
        e.eta_random = random.eta;
        rep.curve_rows.insert(rep.curve_rows.end(), random.rows.begin(), random.rows.end());
        if (with_even)
        {
            auto even = search_simulated_load(base, model, BeamformerKind::ZF, Mode::Eud, n, scan, opt.seed,
                                              opt.threads, opt.target, 20, opt.progress);
            e.eta_even = even.eta;
            rep.curve_rows.insert(rep.curve_rows.end(), even.rows.begin(), even.rows.end());
        }
        rep.entries.push_back(e);
    }
    return rep;
}

inline double relative_deviation(double value, double reference) { return (value - reference) / reference; }

inline void write_table3(std::ostream &os, const TableReport &rep)
{
    CsvWriter w(os);
    w.write_record(std::array<std::string_view, 10>{"M", "C", "P", "rho_db", "target", "eta_multi", "eta_single",
                                                    "gain", "reference_gain", "rel_deviation"});
    for (const auto &[m, ref] : reference_gains())
    {
        const double g = rep.gain(m);
        w.write_record(std::array<std::string, 10>{
            format_number(m), format_number(rep.channels), format_number(rep.preambles), format_number(rep.rho_db),
            format_number(rep.target), format_number(rep.entry(m).eta_random), format_number(rep.eta_single),
            format_number(g), format_number(ref), format_number(relative_deviation(g, ref))});
    }
}

inline void write_table4(std::ostream &os, const TableReport &rep)
{
    CsvWriter w(os);
    w.write_record(std::array<std::string_view, 10>{"M", "C", "P", "rho_db", "target", "eta_even", "eta_random",
                                                    "gap", "reference_gap", "rel_deviation"});
    for (const auto &[m, ref] : reference_gaps())
    {
        const double eta_even = m == 1 ? rep.eta_single_even : *rep.entry(m).eta_even;
        const double eta_random = m == 1 ? rep.eta_single : rep.entry(m).eta_random;
        const double g = rep.gap(m);
        w.write_record(std::array<std::string, 10>{
            format_number(m), format_number(rep.channels), format_number(rep.preambles), format_number(rep.rho_db),
            format_number(rep.target), format_number(eta_even), format_number(eta_random), format_number(g),
            format_number(ref), format_number(relative_deviation(g, ref))});
    }
}

/// How the single-antenna loads, and with them the gains and the M = 1 gap,
/// move with the number of channels. Multi-antenna loads are held at the
/// simulated values for `rep.channels`.
inline void write_channel_sensitivity(std::ostream &os, const TableReport &rep)
{
    CsvWriter w(os);
    w.write_record(std::array<std::string_view, 7>{"C", "eta_single", "gap_M1", "M", "eta_multi_held",
                                                   "gain", "reference_gain"});
    std::vector<int> cs{10, 100, 1000};
    if (std::find(cs.begin(), cs.end(), rep.channels) == cs.end())
        cs.insert(cs.begin(), rep.channels);
    for (int c : cs)
    {
        const double eta_s = single_antenna_load(c, rep.target);
        const double gap1 = analytic::gap_to_eud(rep.eta_single_even, eta_s);
        for (const auto &[m, ref] : reference_gains())
        {
            const auto it = std::find_if(rep.entries.begin(), rep.entries.end(),
                                         [m = m](const TableEntry &e) { return e.antennas == m; });
            if (it == rep.entries.end())
                continue;
            w.write_record(std::array<std::string, 7>{format_number(c), format_number(eta_s), format_number(gap1),
                                                      format_number(m), format_number(it->eta_random),
                                                      format_number(analytic::mimo_gain(it->eta_random, eta_s)),
                                                      format_number(ref)});
        }
    }
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct ReproduceOutcome
{
    std::vector<std::filesystem::path> files;
    std::vector<PointFailure> failures;
    std::optional<TableReport> tables;
};

inline std::filesystem::path write_file(const std::filesystem::path &path,
                                        const std::function<void(std::ostream &)> &body)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(os);
    if (!os)
        throw std::runtime_error("write to " + path.string() + " failed");
    return path;
}

inline ReproduceOutcome reproduce(Target target, const std::filesystem::path &out_dir, const ReproduceOptions &opt)
{
    std::filesystem::create_directories(out_dir);
    ReproduceOutcome out;
    const std::string tag(to_string(target));

    if (target == Target::Table3 || target == Target::Table4)
    {
        const bool gaps = target == Target::Table4;
        const std::vector<int> arrays = gaps ? std::vector<int>{50, 100, 200, 400} : std::vector<int>{100, 200, 400};
        try
        {
            TableReport rep = compute_tables(arrays, gaps, opt);
            out.files.push_back(write_file(out_dir / (tag + ".csv"), [&](std::ostream &os) {
                gaps ? write_table4(os, rep) : write_table3(os, rep);
            }));
            out.files.push_back(write_file(out_dir / (tag + "_curves.csv"),
                                           [&](std::ostream &os) { write_results(os, rep.curve_rows); }));
            out.files.push_back(write_file(out_dir / (tag + "_channel_sensitivity.csv"),
                                           [&](std::ostream &os) { write_channel_sensitivity(os, rep); }));
            out.tables = std::move(rep);
        }
        catch (const std::exception &e)
        {
            out.failures.push_back({tag, e.what()});
        }
        return out;
    }

    for (const auto &curve : figure_curves(target, opt))
    {
        auto result = evaluate(curve.spec, opt.progress);
        for (auto &f : result.failures)
            out.failures.push_back({curve.name + ": " + f.where, f.message});
        out.files.push_back(write_file(out_dir / (curve.name + ".csv"),
                                       [&](std::ostream &os) { write_results(os, result.rows); }));
    }
    return out;
}

} // namespace gfra::cli

#endif
