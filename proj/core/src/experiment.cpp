// SPDX-License-Identifier: Apache-2.0
//
// irscpd - structured tensor channel estimation for IRS-assisted mmWave OFDM
// Copyright (C) 2026 The irscpd authors
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

#include "irscpd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace irscpd::eval
{

const char *to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::snr: return "snr";
    case SweepAxis::t: return "t";
    case SweepAxis::p: return "p";
    case SweepAxis::q: return "q";
    case SweepAxis::pq: return "pq";
    }
    return "?";
}

SweepAxis parse_sweep_axis(const std::string &name)
{
    for (auto a : {SweepAxis::snr, SweepAxis::t, SweepAxis::p, SweepAxis::q, SweepAxis::pq})
        if (name == to_string(a))
            return a;
    throw std::invalid_argument(fmt::format("unknown sweep axis '{}' (snr, t, p, q, pq)", name));
}

const char *to_string(scpd::RankMode mode)
{
    return mode == scpd::RankMode::oracle ? "oracle" : "mdl";
}

scpd::RankMode parse_rank_mode(const std::string &name)
{
    if (name == "oracle")
        return scpd::RankMode::oracle;
    if (name == "mdl")
        return scpd::RankMode::mdl;
    throw std::invalid_argument(fmt::format("unknown rank mode '{}' (oracle, mdl)", name));
}

namespace
{

int axis_int(double v)
{
    const double r = std::round(v);
    if (r != v || r < 1.0 || r > 1e6)
        throw std::invalid_argument(fmt::format("axis value {} is not a positive integer", v));
    return static_cast<int>(r);
}

bool is_known_method(const std::string &m)
{
    return m == kMethodScpd || m == kMethodSompCoarse || m == kMethodSompFine;
}

} // namespace

SystemConfig ExperimentConfig::system_at(double axis_value) const
{
    SystemConfig s = system;
    switch (axis)
    {
    case SweepAxis::snr: break;
    case SweepAxis::t: s.t = axis_int(axis_value); break;
    case SweepAxis::p: s.p = axis_int(axis_value); break;
    case SweepAxis::q: s.q = axis_int(axis_value); break;
    case SweepAxis::pq: s.p = s.q = axis_int(axis_value); break;
    }
    return s;
}

double ExperimentConfig::snr_at(double axis_value) const
{
    return axis == SweepAxis::snr ? axis_value : snr_db;
}

void ExperimentConfig::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("trials must be at least 1");
    if (axis_values.empty())
        throw std::invalid_argument("sweep axis has no values");
    if (methods.empty())
        throw std::invalid_argument("method list is empty");
    for (const auto &m : methods)
        if (!is_known_method(m))
            throw std::invalid_argument(
                fmt::format("unknown method '{}' (scpd, somp-coarse, somp-fine)", m));
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i] == methods[j])
                throw std::invalid_argument(fmt::format("method '{}' listed twice", methods[i]));
    for (double v : axis_values)
    {
        system_at(v).validate();
        if (std::isnan(snr_at(v)))
            throw std::invalid_argument("SNR must not be NaN");
    }
    for (const auto *g : {&somp_coarse, &somp_fine})
        if (g->irs_a < 1 || g->irs_e < 1 || g->bs < 1 || g->delay < 0)
            throw std::invalid_argument("SOMP grid sizes must be positive");
    if (output.empty())
        throw std::invalid_argument("output path is empty");
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters)
{
    // The additive constant on the counter side keeps the derivation
    // asymmetric: derive_seed(a, {b}) != derive_seed(b, {a}).
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t c : counters)
        h = splitmix64(h ^ (splitmix64(c) + 0x632be59bd9b4e019ULL));
    return h;
}

Instance simulate_instance(const SystemConfig &system, double snr_db, std::uint64_t trial_seed,
                           int axis_index)
{
    system.validate();
    Instance inst;
    inst.system = system;
    inst.trial_seed = trial_seed;
    inst.axis_index = axis_index;

    Rng channel_rng(derive_seed(trial_seed, {0}));
    Rng training_rng(derive_seed(trial_seed, {1}));
    Rng noise_rng(derive_seed(trial_seed, {2, static_cast<std::uint64_t>(axis_index)}));

    inst.paths = draw_paths(system, channel_rng);
    inst.truth = compose(inst.paths, system);
    inst.h = cascade_channels(inst.truth, system);
    inst.training = gen_training(system, training_rng);
    inst.rx = add_noise(synthesize_rx(inst.h, inst.training), snr_db, noise_rng);
    return inst;
}

namespace
{

ParameterErrors nan_errors()
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan};
}

void run_scpd(MethodOutcome &out, const Instance &inst, const ExperimentConfig &cfg)
{
    scpd::EstimatorOptions opts;
    opts.rank_mode = cfg.rank_mode;
    opts.extract.angle = cfg.angle_search;
    const int u = inst.system.u();
    auto est = scpd::estimate_channel(inst.rx.y, inst.training, inst.system, u, opts);
    out.detected_rank = est.diagnostics.rank;
    out.diagnostics = est.diagnostics;
    if (est.diagnostics.rank != u)
    {
        out.fail_flag = kRankMismatch;
        out.failure = fmt::format("detected rank {} differs from U = {}", est.diagnostics.rank, u);
        out.paths = std::move(est.paths);
        out.h = std::move(est.h);
        return;
    }
    out.nmse = nmse(est.h, inst.h);
    out.mse = align_paths(est.paths, inst.truth, inst.system).mse;
    out.paths = std::move(est.paths);
    out.h = std::move(est.h);
}

void run_somp(MethodOutcome &out, const Instance &inst, const somp::GridSpec &grid)
{
    const somp::Dictionary dict(inst.training, inst.system, grid);
    const int u = inst.system.u();
    auto res = somp::somp(inst.rx.y, dict, u);
    out.detected_rank = static_cast<int>(res.support.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < res.points.size(); ++i)
    {
        CompositePath cp;
        cp.omega_a = res.points[i].omega_a;
        cp.omega_e = res.points[i].omega_e;
        cp.phi = res.points[i].phi;
        cp.iota = dict.has_delay() ? res.points[i].iota : nan;
        cp.beta = cd(nan, nan);
        out.paths.push_back(cp);
    }
    out.nmse = nmse(res.h, inst.h);
    out.mse = out.paths.size() == inst.truth.size()
                  ? align_paths(out.paths, inst.truth, inst.system).mse
                  : nan_errors();
    out.h = std::move(res.h);
}

} // namespace

MethodOutcome run_method(const std::string &method, const Instance &inst,
                         const ExperimentConfig &cfg)
{
    if (!is_known_method(method))
        throw std::invalid_argument(fmt::format("unknown method '{}'", method));
    MethodOutcome out;
    out.method = method;
    out.mse = nan_errors();
    const auto start = std::chrono::steady_clock::now();
    try
    {
        if (method == kMethodScpd)
            run_scpd(out, inst, cfg);
        else
            run_somp(out, inst, method == kMethodSompCoarse ? cfg.somp_coarse : cfg.somp_fine);
    }
    catch (const std::exception &e)
    {
        out.fail_flag = kEstimationFailed;
        out.failure = e.what();
    }
    if (out.fail_flag != kOk)
    {
        out.nmse = 1.0;
        out.mse = nan_errors();
    }
    if (cfg.timing)
        out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                start)
                          .count();
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace
{

double mean(const std::vector<double> &values)
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double v : values)
        s += v;
    return s / static_cast<double>(values.size());
}

} // namespace

std::vector<AggregateRow> aggregate(const std::vector<RunRecord> &records)
{
    // Keep first-appearance order of (axis value, method).
    std::vector<std::pair<double, std::string>> keys;
    std::map<std::pair<double, std::string>, std::pair<std::vector<double>, std::vector<double>>>
        groups;
    for (const auto &r : records)
    {
        const auto key = std::make_pair(r.axis_value, r.method);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted)
            keys.push_back(key);
        it->second.first.push_back(r.nmse);
        if (r.fail_flag == kOk)
            it->second.second.push_back(r.nmse);
    }
    std::vector<AggregateRow> rows;
    for (const auto &key : keys)
    {
        const auto &[all, ok] = groups.at(key);
        AggregateRow row;
        row.axis_value = key.first;
        row.method = key.second;
        row.trials = static_cast<int>(all.size());
        row.failures = static_cast<int>(all.size() - ok.size());
        row.median_nmse = median(all);
        row.mean_nmse = mean(all);
        row.median_nmse_success = median(ok);
        row.mean_nmse_success = mean(ok);
        rows.push_back(row);
    }
    return rows;
}

SweepResult run_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    SweepResult result;
    for (std::size_t ai = 0; ai < cfg.axis_values.size(); ++ai)
    {
        const double value = cfg.axis_values[ai];
        const SystemConfig system = cfg.system_at(value);
        const double snr = cfg.snr_at(value);
        for (int trial = 0; trial < cfg.trials; ++trial)
        {
            const std::uint64_t trial_seed =
                derive_seed(cfg.seed, {static_cast<std::uint64_t>(trial)});
            const Instance inst = simulate_instance(system, snr, trial_seed, static_cast<int>(ai));
            for (const auto &method : cfg.methods)
            {
                const MethodOutcome o = run_method(method, inst, cfg);
                result.records.push_back({value, trial, trial_seed, method, o.nmse, o.mse,
                                          o.detected_rank, o.fail_flag, o.wall_ms});
            }
        }
    }
    result.aggregates = aggregate(result.records);
    return result;
}

namespace
{

std::string num(double v)
{
    return fmt::format("{:.17g}", v);
}

} // namespace

void write_records_csv(std::ostream &os, const std::vector<RunRecord> &records)
{
    os << "axis_value,trial,seed,method,nmse,mse_omega_a,mse_omega_e,mse_phi,mse_iota,mse_beta,"
          "detected_rank,fail_flag,wall_ms\n";
    for (const auto &r : records)
        fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(r.axis_value), r.trial,
                   r.seed, r.method, num(r.nmse), num(r.mse.omega_a), num(r.mse.omega_e),
                   num(r.mse.phi), num(r.mse.iota), num(r.mse.beta), r.detected_rank,
                   r.fail_flag, num(r.wall_ms));
}

void write_aggregate_csv(std::ostream &os, const std::vector<AggregateRow> &rows)
{
    os << "axis_value,method,trials,failures,median_nmse,mean_nmse,median_nmse_success,"
          "mean_nmse_success\n";
    for (const auto &r : rows)
        fmt::print(os, "{},{},{},{},{},{},{},{}\n", num(r.axis_value), r.method, r.trials,
                   r.failures, num(r.median_nmse), num(r.mean_nmse), num(r.median_nmse_success),
                   num(r.mean_nmse_success));
}

} // namespace irscpd::eval
