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

// irscpd command-line tool: simulate, estimate, sweep, check.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "irscpd/experiment.hpp"
#include "irscpd/scpd.hpp"
#include "irscpd/serialization.hpp"

namespace
{

using irscpd::eval::ExperimentConfig;

// Flags that override values from a configuration file.
struct Overrides
{
    std::optional<int> n_bs, mx, my, p, q, t, l, lr;
    std::optional<double> snr_db;
    std::optional<int> trials;
    std::vector<std::string> methods;
    std::optional<std::string> rank_mode;
    std::optional<std::string> axis;
    std::vector<double> values;
    std::optional<std::string> output;
    bool timing = false;

    void add_system(CLI::App *app)
    {
        app->add_option("--n-bs", n_bs, "BS antennas");
        app->add_option("--mx", mx, "IRS elements along x");
        app->add_option("--my", my, "IRS elements along y");
        app->add_option("--p", p, "training subcarriers P");
        app->add_option("--q", q, "IRS slots per frame Q");
        app->add_option("--t", t, "frames T");
        app->add_option("--l", l, "BS-IRS paths L");
        app->add_option("--lr", lr, "IRS-user paths Lr");
    }

    void apply(ExperimentConfig &cfg) const
    {
        auto &s = cfg.system;
        if (n_bs) s.n_bs = *n_bs;
        if (mx) s.mx = *mx;
        if (my) s.my = *my;
        if (p) s.p = *p;
        if (q) s.q = *q;
        if (t) s.t = *t;
        if (l) s.l = *l;
        if (lr) s.lr = *lr;
        if (snr_db) cfg.snr_db = *snr_db;
        if (trials) cfg.trials = *trials;
        if (!methods.empty()) cfg.methods = methods;
        if (rank_mode) cfg.rank_mode = irscpd::eval::parse_rank_mode(*rank_mode);
        if (axis) cfg.axis = irscpd::eval::parse_sweep_axis(*axis);
        if (!values.empty()) cfg.axis_values = values;
        if (output) cfg.output = *output;
        if (timing) cfg.timing = true;
    }
};

ExperimentConfig load_config(const std::string &path)
{
    return path.empty() ? ExperimentConfig{} : irscpd::io::load_experiment_config(path);
}

std::filesystem::path sibling(const std::filesystem::path &csv, const std::string &suffix)
{
    auto out = csv;
    out.replace_extension();
    out += suffix;
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

int cmd_simulate(const std::string &config, const Overrides &ov, std::uint64_t seed, int trial,
                 int axis_index, const std::string &out_path)
{
    ExperimentConfig cfg = load_config(config);
    ov.apply(cfg);
    const auto trial_seed =
        irscpd::eval::derive_seed(seed, {static_cast<std::uint64_t>(trial)});
    const auto inst = irscpd::eval::simulate_instance(cfg.system, cfg.snr_db, trial_seed, axis_index);
    if (out_path.empty() || out_path == "-")
        irscpd::io::write_instance(std::cout, inst);
    else
        irscpd::io::save_instance(out_path, inst);
    return 0;
}

int cmd_estimate(const std::string &config, const Overrides &ov, const std::string &instance,
                 const std::string &method, const std::string &out_path)
{
    ExperimentConfig cfg = load_config(config);
    ov.apply(cfg);
    const auto inst = irscpd::io::load_instance(instance);
    const auto outcome = irscpd::eval::run_method(method, inst, cfg);
    const std::string text = irscpd::io::outcome_to_json(outcome) + "\n";
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_text(out_path, text);
    return outcome.fail_flag == irscpd::eval::kOk ? 0 : 3;
}

int cmd_sweep(const std::string &config, const Overrides &ov, std::uint64_t seed)
{
    ExperimentConfig cfg = load_config(config);
    ov.apply(cfg);
    cfg.seed = seed;
    cfg.validate();
    const auto result = irscpd::eval::run_sweep(cfg);

    const std::filesystem::path csv = cfg.output;
    if (csv.has_parent_path())
        std::filesystem::create_directories(csv.parent_path());
    {
        std::ofstream out(csv);
        if (!out)
            throw std::runtime_error(fmt::format("cannot write '{}'", csv.string()));
        irscpd::eval::write_records_csv(out, result.records);
    }
    {
        std::ofstream out(sibling(csv, ".aggregate.csv"));
        irscpd::eval::write_aggregate_csv(out, result.aggregates);
    }
    write_text(sibling(csv, ".config.json"), irscpd::io::experiment_config_to_json(cfg) + "\n");
    irscpd::eval::write_aggregate_csv(std::cout, result.aggregates);
    return 0;
}

int cmd_check(const std::string &config, const Overrides &ov)
{
    ExperimentConfig cfg = load_config(config);
    ov.apply(cfg);
    cfg.system.validate();
    const auto report = irscpd::scpd::check_identifiability(cfg.system, cfg.system.u());
    std::cout << irscpd::io::identifiability_to_json(report, cfg.system) << "\n";
    return report.vandermonde_condition_holds ? 0 : 2;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"irscpd: structured tensor channel estimation for IRS-assisted mmWave OFDM"};
    app.require_subcommand(1);

    std::string config;
    Overrides ov;

    auto *sim = app.add_subcommand("simulate", "draw one instance (measurements + truth) to a file");
    std::uint64_t sim_seed = 0;
    int sim_trial = 0;
    int sim_axis = 0;
    std::string sim_out;
    sim->add_option("--config", config, "experiment configuration (JSON)")->check(CLI::ExistingFile);
    ov.add_system(sim);
    sim->add_option("--snr", ov.snr_db, "SNR in dB");
    sim->add_option("--seed", sim_seed, "master seed")->required();
    sim->add_option("--trial", sim_trial, "trial number (matches sweep records)");
    sim->add_option("--axis-index", sim_axis, "axis index used for the noise stream");
    sim->add_option("-o,--output", sim_out, "instance file ('-' for stdout)");

    auto *est = app.add_subcommand("estimate", "run one method on a saved instance");
    std::string est_instance;
    std::string est_method = irscpd::eval::kMethodScpd;
    std::string est_out;
    est->add_option("instance", est_instance, "instance file")->required()->check(CLI::ExistingFile);
    est->add_option("--config", config, "experiment configuration (JSON) for method settings")
        ->check(CLI::ExistingFile);
    est->add_option("-m,--method", est_method, "scpd, somp-coarse or somp-fine");
    est->add_option("--rank-mode", ov.rank_mode, "oracle or mdl");
    est->add_option("-o,--output", est_out, "estimate JSON ('-' for stdout)");

    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep from a configuration file");
    std::uint64_t sweep_seed = 0;
    sweep->add_option("--config", config, "experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--seed", sweep_seed, "master seed")->required();
    ov.add_system(sweep);
    sweep->add_option("--snr", ov.snr_db, "SNR in dB for non-SNR axes");
    sweep->add_option("--trials", ov.trials, "trials per axis point");
    sweep->add_option("--methods", ov.methods, "methods to run");
    sweep->add_option("--rank-mode", ov.rank_mode, "oracle or mdl");
    sweep->add_option("--axis", ov.axis, "snr, t, p, q or pq");
    sweep->add_option("--values", ov.values, "axis values");
    sweep->add_option("-o,--output", ov.output, "per-trial CSV path");
    sweep->add_flag("--timing", ov.timing, "record wall-clock time per method (non-reproducible)");

    auto *check = app.add_subcommand("check", "identifiability report for a configuration");
    check->add_option("--config", config, "experiment configuration (JSON)")
        ->check(CLI::ExistingFile);
    ov.add_system(check);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sim->parsed())
            return cmd_simulate(config, ov, sim_seed, sim_trial, sim_axis, sim_out);
        if (est->parsed())
            return cmd_estimate(config, ov, est_instance, est_method, est_out);
        if (sweep->parsed())
            return cmd_sweep(config, ov, sweep_seed);
        if (check->parsed())
            return cmd_check(config, ov);
    }
    catch (const std::exception &e)
    {
        std::cerr << "irscpd: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
