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

#ifndef IRSCPD_EXPERIMENT_HPP
#define IRSCPD_EXPERIMENT_HPP

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "irscpd/channel_model.hpp"
#include "irscpd/metrics.hpp"
#include "irscpd/scpd.hpp"
#include "irscpd/somp.hpp"
#include "irscpd/training.hpp"

namespace irscpd::eval
{

/// Quantity varied along a sweep. `pq` sets P and Q to the same value.
enum class SweepAxis
{
    snr,
    t,
    p,
    q,
    pq,
};

const char *to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string &name);

/// Method names accepted in ExperimentConfig::methods.
inline constexpr const char *kMethodScpd = "scpd";
inline constexpr const char *kMethodSompCoarse = "somp-coarse";
inline constexpr const char *kMethodSompFine = "somp-fine";

const char *to_string(scpd::RankMode mode);
scpd::RankMode parse_rank_mode(const std::string &name);

struct ExperimentConfig
{
    SystemConfig system;
    SweepAxis axis = SweepAxis::snr;
    std::vector<double> axis_values{10.0};
    double snr_db = 10.0;           // used whenever the axis is not snr
    int trials = 1;
    std::vector<std::string> methods{kMethodScpd};
    scpd::RankMode rank_mode = scpd::RankMode::oracle;
    std::uint64_t seed = 0;
    std::string output = "results.csv";
    somp::GridSpec somp_coarse{16, 16, 32, 0};
    somp::GridSpec somp_fine{32, 32, 64, 0};
    AngleSearchOptions angle_search;
    bool timing = false;            // measure wall_ms; off keeps output byte-stable

    /// System configuration at one axis point (axis value applied).
    SystemConfig system_at(double axis_value) const;
    double snr_at(double axis_value) const;

    /// Throws std::invalid_argument naming the first problem.
    void validate() const;
};

///
/// Counter-based seed derivation. Every stream is a pure function of the
/// master seed and small integer counters, so adding methods or axis points
/// never shifts another trial's draws:
///
///   trial_seed    = derive_seed(master, {trial})
///   channel rng   = derive_seed(trial_seed, {0})
///   training rng  = derive_seed(trial_seed, {1})
///   noise rng     = derive_seed(trial_seed, {2, axis_index})
///
/// The mixer is SplitMix64: h = mix(base), then h <- mix(h ^ (mix(c) + K)) per
/// counter, K = 0x632be59bd9b4e019.
///
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

/// One simulated measurement burst with its ground truth.
struct Instance
{
    SystemConfig system;
    std::uint64_t trial_seed = 0;
    int axis_index = 0;
    PathSet paths;
    CompositePathSet truth;
    std::vector<ComplexMatrix> h;  // true H_p, p = 1..P
    TrainingMatrices training;
    ReceivedTensor rx;
};

/// Draws channel, training and noise from the streams above.
Instance simulate_instance(const SystemConfig &system, double snr_db, std::uint64_t trial_seed,
                           int axis_index = 0);

enum FailFlag : int
{
    kOk = 0,
    kEstimationFailed = 1,  // the estimator threw (EVD, conditioning, identifiability, ...)
    kRankMismatch = 2,      // MDL rank differs from the true U
};

/// Result of running one method on one instance.
struct MethodOutcome
{
    std::string method;
    double nmse = 1.0;
    ParameterErrors mse;
    int detected_rank = 0;
    int fail_flag = kOk;
    std::string failure;                // message when fail_flag != kOk
    CompositePathSet paths;             // estimated paths (NaN for unavailable parameters)
    std::vector<ComplexMatrix> h;       // empty on failure
    scpd::EstimateDiagnostics diagnostics;
    double wall_ms = 0.0;
};

/// Runs `method` on `inst`. Never throws for estimator failures; those are
/// reported through fail_flag with the NMSE = 1 sentinel. Throws
/// std::invalid_argument for an unknown method name.
MethodOutcome run_method(const std::string &method, const Instance &inst,
                         const ExperimentConfig &cfg);

struct RunRecord
{
    double axis_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string method;
    double nmse = 1.0;
    ParameterErrors mse;
    int detected_rank = 0;
    int fail_flag = kOk;
    double wall_ms = 0.0;
};

struct AggregateRow
{
    double axis_value = 0.0;
    std::string method;
    int trials = 0;
    int failures = 0;
    double median_nmse = 0.0;          // failures counted with NMSE = 1
    double mean_nmse = 0.0;
    double median_nmse_success = 0.0;  // failures excluded (NaN when all failed)
    double mean_nmse_success = 0.0;
};

struct SweepResult
{
    std::vector<RunRecord> records;    // axis point, then trial, then method order
    std::vector<AggregateRow> aggregates;
};

double median(std::vector<double> values);

/// Aggregate table recomputed from per-trial records.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord> &records);

/// Full Monte-Carlo sweep. Deterministic in (cfg, cfg.seed).
SweepResult run_sweep(const ExperimentConfig &cfg);

void write_records_csv(std::ostream &os, const std::vector<RunRecord> &records);
void write_aggregate_csv(std::ostream &os, const std::vector<AggregateRow> &rows);

} // namespace irscpd::eval

#endif
