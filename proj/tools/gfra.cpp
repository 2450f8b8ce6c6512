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

// gfra command-line front end.
//
//   gfra analytic  [sweep options]            closed forms only
//   gfra simulate  [sweep options]            Monte Carlo only
//   gfra compare   [sweep options]            both, plus max-gap check
//   gfra reproduce <target> --out <dir>       canned figure/table sweeps
//   gfra diagnose  --contenders K --groups S  raw conditioned samples + KS
//
// Every option can also be given in a TOML file passed with --config, using
// the long option name as key. Command-line flags win over the file.
//
// Exit codes: 0 success, 1 failed point or tolerance exceeded, 2 bad input.

#include <gfra/analytic.hpp>
#include <gfra/cli/csv.hpp>
#include <gfra/cli/evaluate.hpp>
#include <gfra/cli/reproduce.hpp>
#include <gfra/cli/sweep.hpp>
#include <gfra/mcsim/trials.hpp>
#include <gfra/specfun.hpp>
#include <gfra/stats.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace
{

using namespace gfra;
using namespace gfra::cli;

struct Options
{
    std::string out;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    double tolerance = 0.03;
    unsigned threads = 1;
    bool quiet = false;

    std::vector<int> antennas{100};
    std::vector<int> preambles{64};
    int channels = 10;
    std::vector<double> etas{4.0};
    std::vector<int> active_ues;
    std::vector<double> rho_db{0.0};
    double gamma_db = 8.0;
    std::string beamformer = "cb";
    std::string channel = "iid";
    std::vector<std::string> modes{"random"};

    double angle_spread = 20.0;
    double azimuth_low = -60.0;
    double azimuth_high = 60.0;
    double spacing = 0.5;
    int paths = 0; // 0: M/2

    std::string target;

    int contenders = 1;
    int groups = 0;
    std::uint64_t samples = 10000;
    std::string ks_out;
};

unsigned resolve_threads(unsigned requested)
{
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

mcsim::ChannelModel channel_model(const Options &o)
{
    if (o.channel == "iid")
        return mcsim::IidRayleigh{};
    if (o.channel == "correlated")
    {
        mcsim::CorrelatedRayleigh c;
        c.angle_spread_deg = o.angle_spread;
        c.azimuth_low_deg = o.azimuth_low;
        c.azimuth_high_deg = o.azimuth_high;
        c.antenna_spacing = o.spacing;
        if (o.paths > 0)
            c.num_paths = o.paths;
        return c;
    }
    throw ConfigError("unknown channel '" + o.channel + "' (expected iid or correlated)");
}

SweepSpec build_spec(const Options &o, bool analytic, bool mc)
{
    SweepSpec s;
    s.antennas = o.antennas;
    s.preambles = o.preambles;
    s.channels = o.channels;
    s.etas = o.etas;
    s.active_ues = o.active_ues;
    s.rho_db = o.rho_db;
    s.gamma_th_db = o.gamma_db;
    try
    {
        s.beamformer = parse_beamformer(o.beamformer);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    s.channel = channel_model(o);
    s.modes.clear();
    for (const auto &m : o.modes)
        s.modes.push_back(parse_mode(m));
    s.trials = o.trials;
    s.seed = o.seed;
    s.threads = resolve_threads(o.threads);
    s.run_analytic = analytic;
    s.run_mc = mc;
    s.validate();
    return s;
}

void write_manifest(const std::vector<PointFailure> &failures, const std::string &path)
{
    std::ostringstream text;
    for (const auto &f : failures)
        text << f.where << ": " << f.message << '\n';
    if (path.empty())
    {
        std::cerr << text.str();
        return;
    }
    std::ofstream os(path);
    os << text.str();
    std::cerr << failures.size() << " point(s) failed; see " << path << '\n';
}

ProgressFn make_progress(const Options &o)
{
    if (o.quiet)
        return {};
    return [](std::size_t done, std::size_t total, const std::string &where) {
        if (total > 0)
            std::cerr << "[" << done << "/" << total << "] " << where << '\n';
        else
            std::cerr << where << '\n';
    };
}

int run_sweep(const Options &o, bool analytic, bool mc, bool compare)
{
    const SweepSpec spec = build_spec(o, analytic, mc);
    const SweepResult result = evaluate(spec, make_progress(o));

    if (o.out.empty())
        write_results(std::cout, result.rows);
    else
    {
        std::ofstream os(o.out, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + o.out + " for writing");
        write_results(os, result.rows);
    }

    int rc = 0;
    if (!result.failures.empty())
    {
        write_manifest(result.failures, o.out.empty() ? std::string{} : o.out + ".errors");
        rc = 1;
    }
    if (compare)
    {
        const auto gap = max_gap(result.rows);
        if (gap)
        {
            std::cerr << "max |analytic - mc_estimate| = " << format_number(*gap) << " over " << result.rows.size()
                      << " point(s), tolerance " << format_number(o.tolerance) << '\n';
            if (*gap > o.tolerance)
                rc = 1;
        }
        else
            std::cerr << "max |analytic - mc_estimate|: no point carries both values\n";
    }
    return rc;
}

void report_tables(const TableReport &rep, Target target)
{
    std::cerr << "eta_S = " << format_number(rep.eta_single) << " (C = " << rep.channels
              << "), eta_E(M=1) = " << format_number(rep.eta_single_even) << '\n';
    if (target == Target::Table3)
        for (const auto &[m, ref] : reference_gains())
            std::cerr << "gain M=" << m << ": " << format_number(rep.gain(m)) << " (reference " << format_number(ref)
                      << ", deviation " << format_number(100.0 * relative_deviation(rep.gain(m), ref)) << "%)\n";
    else
        for (const auto &[m, ref] : reference_gaps())
            std::cerr << "gap M=" << m << ": " << format_number(rep.gap(m)) << " (reference " << format_number(ref)
                      << ", deviation " << format_number(100.0 * relative_deviation(rep.gap(m), ref)) << "%)\n";
}

int run_reproduce(const Options &o, bool trials_given)
{
    const Target target = parse_target(o.target);
    ReproduceOptions ro;
    ro.channels = o.channels;
    if (ro.channels < 1)
        throw ConfigError("channels must be >= 1");
    if (trials_given)
        ro.trials = o.trials;
    ro.seed = o.seed;
    ro.threads = resolve_threads(o.threads);
    ro.gamma_th_db = o.gamma_db;
    ro.progress = make_progress(o);

    const std::filesystem::path dir = o.out.empty() ? std::filesystem::path("results") : std::filesystem::path(o.out);
    const auto outcome = reproduce(target, dir, ro);
    if (!o.quiet)
        for (const auto &f : outcome.files)
            std::cerr << "wrote " << f.string() << '\n';
    if (outcome.tables)
        report_tables(*outcome.tables, target);
    if (!outcome.failures.empty())
    {
        write_manifest(outcome.failures, (dir / (o.target + ".errors")).string());
        return 1;
    }
    return 0;
}

int run_diagnose(const Options &o)
{
    const int m = o.antennas.front();
    const int k = o.contenders;
    const int s = o.groups;
    if (m < 1 || k < 0 || s < 0 || s > k || (k > 0 && s == 0) || s + 1 > m)
        throw ConfigError("diagnose: need 0 <= S <= K, S >= 1 when K >= 1, and S + 1 <= M");
    if (o.samples < 2)
        throw ConfigError("diagnose: samples must be >= 2");
    const auto model = channel_model(o);
    try
    {
        mcsim::validate(model);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }

    const auto samples = mcsim::collect_diagnostics(m, model, k, s, o.samples, o.seed);
    if (o.out.empty())
        write_diagnostics(std::cout, samples);
    else
    {
        std::ofstream os(o.out, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + o.out + " for writing");
        write_diagnostics(os, samples);
    }

    std::vector<double> y, u, z;
    for (const auto &d : samples)
    {
        y.push_back(d.y_k);
        u.push_back(d.u_1);
        z.push_back(d.z_val);
    }
    std::ostringstream ks;
    ks << "statistic,reference,value\n";
    if (k >= 1)
        ks << "ks_y_k,cb_interference," << format_number(stats::ks_distance(y, [&](double x) {
                  return analytic::cb_interference_cdf(m, k, x);
              })) << '\n';
    ks << "ks_u_1,erlang_" << m - s << ","
       << format_number(stats::ks_distance(u, [&](double x) {
              return specfun::regularized_lower_gamma_int(static_cast<std::uint64_t>(m - s), x);
          }))
       << '\n';
    if (k > s)
        ks << "ks_z_val,gamma_" << k - s << ","
           << format_number(stats::ks_distance(z, [&](double x) {
                  return specfun::regularized_lower_gamma_int(static_cast<std::uint64_t>(k - s), x);
              }))
           << '\n';
    else
    {
        bool all_zero = true;
        for (double v : z)
            all_zero = all_zero && v == 0.0;
        ks << "z_val_all_zero,point_mass," << (all_zero ? 1 : 0) << '\n';
    }
    const auto mean_y = stats::sample_mean(y);
    ks << "mean_y_k,expected_" << k << "," << format_number(mean_y.mean) << '\n';
    ks << "stderr_y_k,," << format_number(mean_y.std_error) << '\n';

    if (o.ks_out.empty())
        std::cerr << ks.str();
    else
    {
        std::ofstream os(o.ks_out, std::ios::binary);
        os << ks.str();
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Success probability of grant-free random access with massive MIMO"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file whose keys are long option names");

    Options o;
    app.add_option("--out", o.out, "Output CSV (default stdout); directory for reproduce");
    app.add_option("--seed", o.seed, "Base seed of the per-trial random streams");
    auto *trials_opt = app.add_option("--trials", o.trials, "Monte Carlo trials per grid point")
                           ->check(CLI::PositiveNumber);
    app.add_option("--tolerance", o.tolerance, "compare: largest accepted |analytic - mc_estimate|")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--threads", o.threads, "Worker threads (0: all cores); results do not depend on it");
    app.add_flag("--quiet", o.quiet, "Suppress progress output");

    app.add_option("--antennas,-M", o.antennas, "Antenna counts M")->delimiter(',');
    app.add_option("--preambles,-P", o.preambles, "Preamble pool sizes P")->delimiter(',');
    app.add_option("--channels,-C", o.channels, "Number of channels C");
    app.add_option("--eta", o.etas, "Loads eta = N_a / C")->delimiter(',');
    app.add_option("--active-ues", o.active_ues, "Active UE counts N_a (replaces --eta)")->delimiter(',');
    app.add_option("--rho-db", o.rho_db, "Uplink SNR values in dB")->delimiter(',');
    app.add_option("--gamma-db", o.gamma_db, "SINR threshold in dB");
    app.add_option("--beamformer", o.beamformer, "cb or zf");
    app.add_option("--channel", o.channel, "iid or correlated");
    app.add_option("--modes", o.modes, "random, eud, infinite_p, eud_limit, single_antenna")->delimiter(',');
    app.add_option("--angle-spread", o.angle_spread, "Correlated channel: angle spread in degrees");
    app.add_option("--azimuth-low", o.azimuth_low, "Correlated channel: lowest mean azimuth in degrees");
    app.add_option("--azimuth-high", o.azimuth_high, "Correlated channel: highest mean azimuth in degrees");
    app.add_option("--spacing", o.spacing, "Correlated channel: antenna spacing in wavelengths");
    app.add_option("--paths", o.paths, "Correlated channel: propagation paths (0: M/2)");

    auto *cmd_analytic = app.add_subcommand("analytic", "Evaluate the closed forms on the grid");
    auto *cmd_simulate = app.add_subcommand("simulate", "Estimate success rates by simulation");
    auto *cmd_compare = app.add_subcommand("compare", "Evaluate both and report the largest gap");
    auto *cmd_reproduce = app.add_subcommand("reproduce", "Run a canned figure or table sweep");
    cmd_reproduce->add_option("target", o.target, "fig4 fig5 fig7 fig8 fig10 fig11 fig12 table3 table4")
        ->required();
    auto *cmd_diagnose = app.add_subcommand("diagnose", "Sample the conditioned channel quantities");
    cmd_diagnose->add_option("--contenders,-K", o.contenders, "Co-channel contenders K");
    cmd_diagnose->add_option("--groups,-S", o.groups, "Occupied preambles S among contenders");
    cmd_diagnose->add_option("--samples", o.samples, "Number of samples");
    cmd_diagnose->add_option("--ks-out", o.ks_out, "KS summary CSV (default stderr)");
    for (auto *sub : {cmd_analytic, cmd_simulate, cmd_compare, cmd_reproduce, cmd_diagnose})
        sub->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        if (cmd_analytic->parsed())
            return run_sweep(o, true, false, false);
        if (cmd_simulate->parsed())
            return run_sweep(o, false, true, false);
        if (cmd_compare->parsed())
            return run_sweep(o, true, true, true);
        if (cmd_reproduce->parsed())
            return run_reproduce(o, trials_opt->count() > 0);
        if (cmd_diagnose->parsed())
            return run_diagnose(o);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
