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

#ifndef GFRA_CLI_EVALUATE_HPP
#define GFRA_CLI_EVALUATE_HPP

#include "../analytic.hpp"
#include "../mcsim/trials.hpp"
#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfra::cli
{

struct SweepResult
{
    std::vector<ResultRow> rows;
    std::vector<PointFailure> failures;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total, const std::string &where)>;

inline double analytic_value(const SystemParams &p, BeamformerKind kind, Mode mode)
{
    switch (mode)
    {
    case Mode::Random:
        return analytic::success(p, kind);
    case Mode::Eud:
        return analytic::eud_success(p, kind);
    case Mode::InfiniteP:
        return analytic::no_collision_success(p, kind);
    case Mode::EudLimit:
        if (!p.integer_load())
            throw std::invalid_argument("eud_limit: load N_a/C must be an integer");
        return analytic::eud_limit(p.preambles, p.active_ues / p.channels);
    case Mode::SingleAntenna:
        return analytic::single_antenna_success(p.active_ues, p.channels);
    }
    throw std::logic_error("analytic_value: unknown mode");
}

/// Evaluates every grid point in the order M, P, mode, load, rho. Single
/// antenna rows ignore the M axis and are emitted once per P with M = 1.
/// A point that throws is reported in `failures` and skipped.
inline SweepResult evaluate(const SweepSpec &spec, const ProgressFn &progress = {})
{
    spec.validate();
    const auto loads = spec.load_points();
    const double gamma = db_to_linear(spec.gamma_th_db);

    std::size_t total = 0;
    for (std::size_t mi = 0; mi < spec.antennas.size(); ++mi)
        for (Mode mode : spec.modes)
            if (mode != Mode::SingleAntenna || mi == 0)
                total += spec.preambles.size() * loads.size() * spec.rho_db.size();

    SweepResult out;
    std::size_t done = 0;
    for (std::size_t mi = 0; mi < spec.antennas.size(); ++mi)
        for (int preambles : spec.preambles)
            for (Mode mode : spec.modes)
            {
                if (mode == Mode::SingleAntenna && mi != 0)
                    continue;
                for (int n_a : loads)
                    for (double rho_db : spec.rho_db)
                    {
                        SystemParams p;
                        p.antennas = mode == Mode::SingleAntenna ? 1 : spec.antennas[mi];
                        p.preambles = preambles;
                        p.channels = spec.channels;
                        p.active_ues = n_a;
                        p.sinr_threshold = gamma;
                        p.uplink_snr = db_to_linear(rho_db);

                        ResultRow row;
                        row.antennas = p.antennas;
                        row.channels = p.channels;
                        row.preambles = p.preambles;
                        row.active_ues = n_a;
                        row.eta = p.load();
                        row.rho_db = rho_db;
                        row.gamma_th_db = spec.gamma_th_db;
                        row.beamformer = std::string(to_string(spec.beamformer));
                        row.channel_model = mcsim::to_string(spec.channel);
                        row.mode = std::string(to_string(mode));

                        const std::string where = "M=" + std::to_string(p.antennas) + " P=" +
                                                  std::to_string(preambles) + " mode=" + row.mode +
                                                  " N_a=" + std::to_string(n_a) + " rho_db=" + std::to_string(rho_db);
                        try
                        {
                            if (spec.run_analytic)
                                row.analytic = analytic_value(p, spec.beamformer, mode);
                            if (spec.run_mc && has_simulator(mode))
                            {
                                const auto est = mcsim::run_trials(p, spec.channel, spec.beamformer,
                                                                   access_mode(mode), spec.trials, spec.seed,
                                                                   spec.threads);
                                row.mc_estimate = est.p_hat;
                                row.mc_stderr = est.std_error;
                                row.trials = est.trials;
                                row.seed = est.seed;
                            }
                            out.rows.push_back(std::move(row));
                        }
                        catch (const std::exception &e)
                        {
                            out.failures.push_back({where, e.what()});
                        }
                        ++done;
                        if (progress)
                            progress(done, total, where);
                    }
            }
    return out;
}

/// Largest |analytic - mc_estimate| over rows carrying both, if any.
inline std::optional<double> max_gap(const std::vector<ResultRow> &rows)
{
    std::optional<double> worst;
    for (const auto &r : rows)
        if (r.analytic && r.mc_estimate)
            worst = std::max(worst.value_or(0.0), std::fabs(*r.analytic - *r.mc_estimate));
    return worst;
}

} // namespace gfra::cli

#endif
