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

#include <benchmark/benchmark.h>

#include <limits>

#include "irscpd/experiment.hpp"
#include "irscpd/scpd.hpp"
#include "irscpd/somp.hpp"
#include "irscpd/tensor.hpp"
#include "irscpd/training.hpp"

using namespace irscpd;

namespace
{

SystemConfig cube(int n)
{
    SystemConfig cfg;
    cfg.p = n;
    cfg.q = n;
    cfg.t = n;
    return cfg;
}

eval::Instance instance(int n, double snr_db)
{
    return eval::simulate_instance(cube(n), snr_db, eval::derive_seed(1234, {static_cast<std::uint64_t>(n)}));
}

} // namespace

static void BM_SynthesizeDirect(benchmark::State &state)
{
    const auto inst = instance(static_cast<int>(state.range(0)), 10.0);
    for (auto _ : state)
    {
        auto y = synthesize_rx(inst.h, inst.training);
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(BM_SynthesizeDirect)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SynthesizeCpd(benchmark::State &state)
{
    const auto inst = instance(static_cast<int>(state.range(0)), 10.0);
    for (auto _ : state)
    {
        auto y = cpd_synthesize(build_factors(inst.truth, inst.training, inst.system));
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(BM_SynthesizeCpd)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ScpdDecompose(benchmark::State &state)
{
    const auto inst = instance(static_cast<int>(state.range(0)), 10.0);
    for (auto _ : state)
    {
        auto dec = scpd::scpd_decompose(inst.rx.y, inst.system.u());
        benchmark::DoNotOptimize(dec);
    }
}
BENCHMARK(BM_ScpdDecompose)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ScpdEstimate(benchmark::State &state)
{
    const auto inst = instance(static_cast<int>(state.range(0)), 10.0);
    for (auto _ : state)
    {
        auto est = scpd::estimate_channel(inst.rx.y, inst.training, inst.system, inst.system.u());
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(BM_ScpdEstimate)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_IrsAngleSearch(benchmark::State &state)
{
    const auto inst = instance(8, std::numeric_limits<double>::infinity());
    const IrsAngleSearch search(inst.training.v, inst.system.mx, inst.system.my);
    const ComplexVector x = search.projected_steering(1.1, 4.2);
    for (auto _ : state)
    {
        auto r = search.search(x);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_IrsAngleSearch)->Unit(benchmark::kMillisecond);

static void BM_SompDictionary(benchmark::State &state)
{
    const auto inst = instance(8, 10.0);
    const somp::GridSpec grid{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
                              static_cast<int>(2 * state.range(0)), 0};
    for (auto _ : state)
    {
        auto dict = somp::build_dictionary(inst.training, inst.system, grid);
        benchmark::DoNotOptimize(dict);
    }
}
BENCHMARK(BM_SompDictionary)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Somp(benchmark::State &state)
{
    const auto inst = instance(8, 10.0);
    const somp::GridSpec grid{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
                              static_cast<int>(2 * state.range(0)), 0};
    const auto dict = somp::build_dictionary(inst.training, inst.system, grid);
    for (auto _ : state)
    {
        auto r = somp::somp(inst.rx.y, dict, inst.system.u());
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Somp)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
