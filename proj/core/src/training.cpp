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

#include "irscpd/training.hpp"

#include <cmath>

#include <fmt/format.h>

namespace irscpd
{

TrainingMatrices gen_training(const SystemConfig &cfg, Rng &rng)
{
    cfg.validate();
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    TrainingMatrices tm;
    tm.v.resize(cfg.m(), cfg.q);
    for (Index j = 0; j < tm.v.cols(); ++j)
        for (Index i = 0; i < tm.v.rows(); ++i)
            tm.v(i, j) = std::polar(1.0, phase(rng));
    const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.n_bs));
    tm.f.resize(cfg.n_bs, cfg.t);
    for (Index j = 0; j < tm.f.cols(); ++j)
        for (Index i = 0; i < tm.f.rows(); ++i)
            tm.f(i, j) = std::polar(amp, phase(rng));
    return tm;
}

ComplexTensor3 synthesize_rx(const std::vector<ComplexMatrix> &h, const TrainingMatrices &tm)
{
    if (h.empty())
        throw std::invalid_argument("synthesize_rx: no subcarriers");
    const Index q = tm.v.cols();
    const Index t = tm.f.cols();
    ComplexTensor3 y(q, t, static_cast<Index>(h.size()));
    for (std::size_t p = 0; p < h.size(); ++p)
    {
        const auto &hp = h[p];
        if (hp.rows() != tm.v.rows() || hp.cols() != tm.f.rows())
            throw std::invalid_argument(fmt::format(
                "synthesize_rx: H_{} is {}x{}, training expects {}x{}", p + 1, hp.rows(),
                hp.cols(), tm.v.rows(), tm.f.rows()));
        y.slice(static_cast<Index>(p)) = tm.v.transpose() * (hp * tm.f);
    }
    return y;
}

FactorMatrices build_factors(const CompositePathSet &paths, const TrainingMatrices &tm,
                             const SystemConfig &cfg)
{
    const auto u_count = static_cast<Index>(paths.size());
    FactorMatrices f;
    f.a.resize(tm.v.cols(), u_count);
    f.b.resize(tm.f.cols(), u_count);
    f.c.resize(cfg.p, u_count);
    for (Index u = 0; u < u_count; ++u)
    {
        const auto &path = paths[static_cast<std::size_t>(u)];
        f.a.col(u) = tm.v.transpose() * steer_irs(path.omega_a, path.omega_e, cfg.mx, cfg.my);
        f.b.col(u) = path.beta * (tm.f.transpose() * steer_bs(path.phi, cfg.n_bs));
        for (int p = 1; p <= cfg.p; ++p)
            f.c(p - 1, u) = delay_phase(path.iota, p, cfg);
    }
    return f;
}

ReceivedTensor add_noise(const ComplexTensor3 &clean, double snr_db, Rng &rng)
{
    const double signal_energy = squared_norm(clean);
    if (signal_energy == 0.0)
        throw std::invalid_argument("add_noise: signal tensor is identically zero");
    const auto &d = clean.dims();
    ReceivedTensor rx{clean, ComplexTensor3(d[0], d[1], d[2]), snr_db};
    if (std::isinf(snr_db) && snr_db > 0.0)
        return rx;

    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto &x : rx.noise.data())
    {
        const double re = normal(rng);
        const double im = normal(rng);
        x = {re, im};
    }
    const double target_noise_energy = signal_energy / std::pow(10.0, snr_db / 10.0);
    rx.noise *= std::sqrt(target_noise_energy / squared_norm(rx.noise));
    rx.y += rx.noise;
    return rx;
}

double realized_snr_db(const ReceivedTensor &rx)
{
    return 10.0 * std::log10(squared_norm(rx.signal()) / squared_norm(rx.noise));
}

} // namespace irscpd
