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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "irscpd/experiment.hpp"

using namespace irscpd;
using namespace irscpd::eval;

namespace
{

ExperimentConfig tiny()
{
    ExperimentConfig cfg;
    cfg.system.p = cfg.system.q = cfg.system.t = 4;
    cfg.system.mx = cfg.system.my = 4;
    cfg.system.n_bs = 8;
    cfg.axis_values = {10.0};
    cfg.trials = 2;
    cfg.methods = {kMethodScpd, kMethodSompCoarse};
    cfg.seed = 17;
    return cfg;
}

std::string csv(const SweepResult &r)
{
    std::ostringstream os;
    write_records_csv(os, r.records);
    write_aggregate_csv(os, r.aggregates);
    return os.str();
}

} // namespace

TEST(Seeding, DerivationIsStableAndSpread)
{
    EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 4; ++m)
        for (std::uint64_t a = 0; a < 50; ++a)
        {
            seen.insert(derive_seed(m, {a}));
            seen.insert(derive_seed(m, {a, 0}));
        }
    EXPECT_EQ(seen.size(), 400u);
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}

TEST(Experiment, ConfigValidation)
{
    auto cfg = tiny();
    EXPECT_NO_THROW(cfg.validate());
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = tiny();
    cfg.axis_values.clear();
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = tiny();
    cfg.methods = {"omp"};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = tiny();
    cfg.axis = SweepAxis::t;
    cfg.axis_values = {2.5};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    EXPECT_THROW(parse_sweep_axis("frequency"), std::invalid_argument);
    EXPECT_THROW(parse_rank_mode("guess"), std::invalid_argument);
}

TEST(Experiment, AxisApplication)
{
    auto cfg = tiny();
    cfg.axis = SweepAxis::pq;
    EXPECT_EQ(cfg.system_at(6).p, 6);
    EXPECT_EQ(cfg.system_at(6).q, 6);
    EXPECT_EQ(cfg.snr_at(6), cfg.snr_db);
    cfg.axis = SweepAxis::snr;
    EXPECT_EQ(cfg.snr_at(25.0), 25.0);
    EXPECT_EQ(cfg.system_at(25.0), cfg.system);
}

TEST(Experiment, SimulationSharesChannelAcrossAxisPoints)
{
    SystemConfig s;
    s.p = s.q = s.t = 4;
    const auto a = simulate_instance(s, 0.0, 99, 0);
    const auto b = simulate_instance(s, 20.0, 99, 3);
    EXPECT_EQ(a.truth[0].beta, b.truth[0].beta);
    EXPECT_EQ(a.training.v, b.training.v);
    EXPECT_NE(frobenius_norm(a.rx.noise), frobenius_norm(b.rx.noise));
}

TEST(Experiment, SweepIsDeterministic)
{
    const auto cfg = tiny();
    EXPECT_EQ(csv(run_sweep(cfg)), csv(run_sweep(cfg)));
}

TEST(Experiment, AddingMethodsDoesNotPerturbOthers)
{
    auto one = tiny();
    one.methods = {kMethodScpd};
    auto two = tiny();
    two.methods = {kMethodSompCoarse, kMethodScpd};
    const auto r1 = run_sweep(one);
    const auto r2 = run_sweep(two);
    std::vector<double> a, b;
    for (const auto &r : r1.records)
        a.push_back(r.nmse);
    for (const auto &r : r2.records)
        if (r.method == kMethodScpd)
            b.push_back(r.nmse);
    EXPECT_EQ(a, b);
}

TEST(Experiment, FailuresAreRecordedNotThrown)
{
    auto cfg = tiny();
    cfg.system.q = 3;  // below U = 4
    cfg.methods = {kMethodScpd};
    const auto r = run_sweep(cfg);
    ASSERT_EQ(r.records.size(), 2u);
    for (const auto &rec : r.records)
    {
        EXPECT_EQ(rec.fail_flag, kEstimationFailed);
        EXPECT_EQ(rec.nmse, 1.0);
        EXPECT_TRUE(std::isnan(rec.mse.phi));
    }
    ASSERT_EQ(r.aggregates.size(), 1u);
    EXPECT_EQ(r.aggregates[0].failures, 2);
    EXPECT_EQ(r.aggregates[0].median_nmse, 1.0);
    EXPECT_TRUE(std::isnan(r.aggregates[0].median_nmse_success));
}

TEST(Experiment, RunMethodReportsFailureKind)
{
    SystemConfig s;
    s.p = 8;
    s.q = 3;
    s.t = 8;
    const auto inst = simulate_instance(s, 10.0, 5);
    const auto out = run_method(kMethodScpd, inst, ExperimentConfig{});
    EXPECT_EQ(out.fail_flag, kEstimationFailed);
    EXPECT_NE(out.failure.find("rank(A)<U possible"), std::string::npos);
    EXPECT_THROW(run_method("nope", inst, ExperimentConfig{}), std::invalid_argument);
}

TEST(Experiment, TwoHundredFiftySixMeasurementPointRuns)
{
    auto cfg = tiny();
    cfg.system = SystemConfig{};
    cfg.system.p = cfg.system.q = 8;
    cfg.axis = SweepAxis::t;
    cfg.axis_values = {4};
    cfg.trials = 1;
    cfg.methods = {kMethodScpd};
    const auto sys = cfg.system_at(4);
    EXPECT_EQ(sys.p * sys.q * sys.t, 256);
    const auto r = run_sweep(cfg);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].fail_flag, kOk);
}

TEST(Experiment, AggregatesRecomputableFromRecords)
{
    std::vector<RunRecord> recs;
    for (int i = 0; i < 5; ++i)
    {
        RunRecord r;
        r.axis_value = 1.0;
        r.trial = i;
        r.method = "scpd";
        r.nmse = 0.1 * (i + 1);
        r.fail_flag = i == 4 ? kRankMismatch : kOk;
        recs.push_back(r);
    }
    const auto rows = aggregate(recs);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(rows[0].median_nmse, 0.3);
    EXPECT_DOUBLE_EQ(rows[0].mean_nmse, 0.3);
    EXPECT_DOUBLE_EQ(rows[0].median_nmse_success, 0.25);
    EXPECT_EQ(rows[0].failures, 1);
    EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
}

TEST(Experiment, CsvFormat)
{
    RunRecord r;
    r.axis_value = 0.1;
    r.trial = 3;
    r.seed = 18446744073709551615ULL;
    r.method = "scpd";
    r.nmse = 1.0 / 3.0;
    std::ostringstream os;
    write_records_csv(os, {r});
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "axis_value,trial,seed,method,nmse,mse_omega_a,mse_omega_e,mse_phi,mse_iota,"
              "mse_beta,detected_rank,fail_flag,wall_ms");
    EXPECT_NE(text.find("0.10000000000000001,3,18446744073709551615,scpd,0.33333333333333331,"),
              std::string::npos);
}
