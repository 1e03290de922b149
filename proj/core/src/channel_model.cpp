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

#include "irscpd/channel_model.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace irscpd
{

void SystemConfig::validate() const
{
    auto require = [](bool ok, const char *what) {
        if (!ok)
            throw std::invalid_argument(fmt::format("SystemConfig: {}", what));
    };
    require(n_bs > 0, "N must be positive");
    require(mx > 0 && my > 0, "Mx and My must be positive");
    require(rf_chains > 0, "R must be positive");
    require(p0 > 0, "P0 must be positive");
    require(p > 0, "P must be positive");
    require(p <= p0, "P must not exceed P0");
    require(q > 0, "Q must be positive");
    require(t > 0, "T must be positive");
    require(fs > 0.0, "fs must be positive");
    require(fc > 0.0, "fc must be positive");
    require(l > 0 && lr > 0, "L and Lr must be positive");
    require(d1 > 0.0, "D1 must be positive");
    require(d2_min > 0.0 && d2_max >= d2_min, "D2 range must be positive and ordered");
    require(max_path_delay >= 0.0, "max path delay must be nonnegative");
    require(2.0 * max_path_delay < unambiguous_delay(),
            "per-hop delays must stay below P0/(2 fs) so composite delays do not alias");
}

cd delay_phase(double delay, int p, const SystemConfig &cfg)
{
    return std::polar(1.0, -kTwoPi * cfg.fs * delay * p / cfg.p0);
}

cd CompositePath::generator(const SystemConfig &cfg) const
{
    return delay_phase(iota, 1, cfg);
}

ComplexVector steer_bs(double phi, int n)
{
    ComplexVector a(n);
    for (int i = 0; i < n; ++i)
        a(i) = std::polar(1.0, i * phi);
    return a;
}

ComplexVector steer_irs(double omega_a, double omega_e, int mx, int my)
{
    ComplexVector a(mx * my);
    for (int iy = 0; iy < my; ++iy)
        for (int ix = 0; ix < mx; ++ix)
            a(ix + mx * iy) = std::polar(1.0, ix * omega_a + iy * omega_e);
    return a;
}

double spatial_frequency(double theta)
{
    return kPi * std::sin(theta);
}

namespace
{

cd circular_gaussian(Rng &rng, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

double free_space_amplitude(double distance, double fc)
{
    return kSpeedOfLight / (4.0 * kPi * distance * fc);
}

double min_generator_phase_gap(const PathSet &paths, const SystemConfig &cfg)
{
    const double scale = kTwoPi * cfg.fs / cfg.p0;
    double gap = std::numeric_limits<double>::infinity();
    std::vector<double> phases;
    for (const auto &ru : paths.irs_user)
        for (const auto &gb : paths.bs_irs)
            phases.push_back(-scale * (ru.kappa + gb.tau));
    for (std::size_t i = 0; i < phases.size(); ++i)
        for (std::size_t j = i + 1; j < phases.size(); ++j)
            gap = std::min(gap, std::abs(angle_difference(phases[i], phases[j])));
    return gap;
}

} // namespace

PathSet draw_paths(const SystemConfig &cfg, Rng &rng, double min_generator_separation)
{
    cfg.validate();
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> delay(0.0, cfg.max_path_delay);
    std::uniform_real_distribution<double> length(cfg.d2_min, cfg.d2_max);

    PathSet out;
    out.bs_irs.resize(static_cast<std::size_t>(cfg.l));
    out.irs_user.resize(static_cast<std::size_t>(cfg.lr));

    const double g_var = std::pow(free_space_amplitude(cfg.d1, cfg.fc), 2);
    for (auto &path : out.bs_irs)
    {
        path.alpha = circular_gaussian(rng, g_var);
        path.phi = angle(rng);
        path.theta_a = angle(rng);
        path.theta_e = angle(rng);
    }
    for (auto &path : out.irs_user)
    {
        path.d2 = length(rng);
        path.rho = circular_gaussian(rng, std::pow(free_space_amplitude(path.d2, cfg.fc), 2));
        path.chi_a = angle(rng);
        path.chi_e = angle(rng);
    }

    // Only delays are redrawn, so gains and angles keep their first draw.
    constexpr int kMaxRedraws = 1000;
    for (int attempt = 0;; ++attempt)
    {
        for (auto &path : out.bs_irs)
            path.tau = delay(rng);
        for (auto &path : out.irs_user)
            path.kappa = delay(rng);
        if (cfg.u() == 1 || min_generator_phase_gap(out, cfg) > min_generator_separation)
            break;
        if (attempt == kMaxRedraws)
            throw std::runtime_error("draw_paths: could not draw distinct composite delays");
    }
    return out;
}

CompositePathSet compose(const PathSet &paths, const SystemConfig &cfg)
{
    const int big_l = static_cast<int>(paths.bs_irs.size());
    const int big_lr = static_cast<int>(paths.irs_user.size());
    if (big_l != cfg.l || big_lr != cfg.lr)
        throw std::invalid_argument(fmt::format(
            "compose: path counts ({}, {}) do not match L={}, Lr={}", big_l, big_lr, cfg.l, cfg.lr));
    CompositePathSet out(static_cast<std::size_t>(big_l * big_lr));
    for (int m = 0; m < big_lr; ++m)
    {
        const auto &ru = paths.irs_user[static_cast<std::size_t>(m)];
        for (int n = 0; n < big_l; ++n)
        {
            const auto &gb = paths.bs_irs[static_cast<std::size_t>(n)];
            auto &c = out[static_cast<std::size_t>(m * big_l + n)];
            c.beta = ru.rho * gb.alpha;
            c.iota = ru.kappa + gb.tau;
            c.omega_a = ru.chi_a + gb.theta_a;
            c.omega_e = ru.chi_e + gb.theta_e;
            c.phi = gb.phi;
            c.m = m;
            c.n = n;
        }
    }
    return out;
}

std::vector<ComplexMatrix> cascade_channels(const CompositePathSet &paths,
                                            const SystemConfig &cfg)
{
    std::vector<ComplexMatrix> h(static_cast<std::size_t>(cfg.p),
                                 ComplexMatrix::Zero(cfg.m(), cfg.n_bs));
    for (const auto &path : paths)
    {
        const ComplexMatrix outer =
            steer_irs(path.omega_a, path.omega_e, cfg.mx, cfg.my) *
            steer_bs(path.phi, cfg.n_bs).transpose();
        for (int p = 1; p <= cfg.p; ++p)
            h[static_cast<std::size_t>(p - 1)] += (path.beta * delay_phase(path.iota, p, cfg)) * outer;
    }
    return h;
}

FrequencyChannels frequency_channels(const PathSet &paths, const SystemConfig &cfg)
{
    FrequencyChannels out;
    const auto np = static_cast<std::size_t>(cfg.p);
    out.g.assign(np, ComplexMatrix::Zero(cfg.m(), cfg.n_bs));
    out.r.assign(np, ComplexVector::Zero(cfg.m()));
    for (const auto &gb : paths.bs_irs)
    {
        const ComplexMatrix outer = steer_irs(gb.theta_a, gb.theta_e, cfg.mx, cfg.my) *
                                    steer_bs(gb.phi, cfg.n_bs).transpose();
        for (int p = 1; p <= cfg.p; ++p)
            out.g[static_cast<std::size_t>(p - 1)] +=
                (gb.alpha * delay_phase(gb.tau, p, cfg)) * outer;
    }
    for (const auto &ru : paths.irs_user)
    {
        const ComplexVector a = steer_irs(ru.chi_a, ru.chi_e, cfg.mx, cfg.my);
        for (int p = 1; p <= cfg.p; ++p)
            out.r[static_cast<std::size_t>(p - 1)] +=
                (ru.rho * delay_phase(ru.kappa, p, cfg)) * a;
    }
    out.h = cascade_channels(compose(paths, cfg), cfg);
    return out;
}

double min_generator_distance(const CompositePathSet &paths, const SystemConfig &cfg)
{
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t j = i + 1; j < paths.size(); ++j)
            d = std::min(d, std::abs(paths[i].generator(cfg) - paths[j].generator(cfg)));
    return d;
}

} // namespace irscpd
