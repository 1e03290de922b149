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

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "irscpd/channel_model.hpp"
#include "test_util.hpp"

using namespace irscpd;

TEST(ChannelModel, SteerBsExamples)
{
    const auto ones = steer_bs(0.0, 5);
    EXPECT_LE((ones - ComplexVector::Ones(5)).norm(), 0.0);
    const auto alt = steer_bs(kPi, 2);
    EXPECT_NEAR(std::abs(alt(0) - cd(1.0, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(alt(1) - cd(-1.0, 0.0)), 0.0, 1e-15);
    Rng rng(20);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int i = 0; i < 20; ++i)
        EXPECT_NEAR(steer_bs(angle(rng), 64).squaredNorm(), 64.0, 1e-11);
}

TEST(ChannelModel, SteerIrsEntryConvention)
{
    const double wa = 0.7;
    const double we = -1.3;
    const auto a = steer_irs(wa, we, 3, 4);
    for (int iy = 0; iy < 4; ++iy)
        for (int ix = 0; ix < 3; ++ix)
            EXPECT_NEAR(std::abs(a(ix + 3 * iy) - std::polar(1.0, ix * wa + iy * we)), 0.0, 1e-15);
    EXPECT_LE((steer_irs(0.0, 0.0, 4, 4) - ComplexVector::Ones(16)).norm(), 0.0);
}

TEST(ChannelModel, SteerIrsIsKroneckerOfLinearResponses)
{
    Rng rng(21);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int i = 0; i < 50; ++i)
    {
        const double wa = angle(rng);
        const double we = angle(rng);
        const auto ax = steer_bs(wa, 16);
        const auto ay = steer_bs(we, 16);
        ComplexVector kron(256);
        for (int iy = 0; iy < 16; ++iy)
            kron.segment(16 * iy, 16) = ay(iy) * ax;
        EXPECT_LE((steer_irs(wa, we, 16, 16) - kron).cwiseAbs().maxCoeff(), 1e-13);
    }
}

// On a dyadic grid of angles every sum and every phase ix*wa + iy*we is exact
// in double precision, so the identity holds up to the rounding of exp alone.
TEST(ChannelModel, SteerIrsAdditivityExactPhases)
{
    Rng rng(22);
    std::uniform_int_distribution<int> ticks(-(1 << 20), 1 << 20);
    const double unit = std::ldexp(1.0, -18);  // angles in [-4, 4]
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const double a1 = unit * ticks(rng), e1 = unit * ticks(rng);
        const double a2 = unit * ticks(rng), e2 = unit * ticks(rng);
        const ComplexVector lhs = steer_irs(a1 + a2, e1 + e2, 16, 16);
        const ComplexVector rhs =
            steer_irs(a1, e1, 16, 16).cwiseProduct(steer_irs(a2, e2, 16, 16));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(worst, 1e-14);
}

// For arbitrary doubles the phases ix*wa + iy*we (|phase| up to 60pi on the
// left-hand side for angles in [-pi, pi)) are themselves rounded, each to
// about half an ulp of their magnitude. The bound allows one such rounding per
// phase involved (three) plus a few ulps from the exponentials.
TEST(ChannelModel, SteerIrsAdditivityGenericAngles)
{
    Rng rng(23);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    const double max_phase = 60.0 * kPi;
    const double half_ulp = 0.5 * (std::nextafter(max_phase, 1e3) - max_phase);
    const double bound = 3.0 * 2.0 * half_ulp + 4.0 * std::numeric_limits<double>::epsilon();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const double a1 = angle(rng), e1 = angle(rng), a2 = angle(rng), e2 = angle(rng);
        const ComplexVector lhs = steer_irs(a1 + a2, e1 + e2, 16, 16);
        const ComplexVector rhs =
            steer_irs(a1, e1, 16, 16).cwiseProduct(steer_irs(a2, e2, 16, 16));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(worst, bound);
}

TEST(ChannelModel, SpatialFrequency)
{
    EXPECT_NEAR(spatial_frequency(0.0), 0.0, 0.0);
    EXPECT_NEAR(spatial_frequency(kPi / 2), kPi, 1e-15);
    EXPECT_NEAR(spatial_frequency(kPi / 6), kPi / 2, 1e-15);
}

TEST(ChannelModel, ValidateRejectsBadConfigs)
{
    SystemConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    auto bad = cfg;
    bad.p = bad.p0 + 1;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.l = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.max_path_delay = 250e-9;  // composite delays could alias
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(ChannelModel, DrawIsDeterministic)
{
    const SystemConfig cfg;
    Rng r1(5), r2(5);
    const auto a = draw_paths(cfg, r1);
    const auto b = draw_paths(cfg, r2);
    ASSERT_EQ(a.bs_irs.size(), 2u);
    for (std::size_t i = 0; i < a.bs_irs.size(); ++i)
    {
        EXPECT_EQ(a.bs_irs[i].alpha, b.bs_irs[i].alpha);
        EXPECT_EQ(a.bs_irs[i].tau, b.bs_irs[i].tau);
        EXPECT_EQ(a.irs_user[i].rho, b.irs_user[i].rho);
        EXPECT_EQ(a.irs_user[i].chi_e, b.irs_user[i].chi_e);
    }
}

TEST(ChannelModel, DrawRanges)
{
    SystemConfig cfg;
    cfg.l = 1;
    cfg.lr = 1;
    Rng rng(23);
    double max_delay = 0.0;
    for (int i = 0; i < 10000; ++i)
    {
        const auto p = draw_paths(cfg, rng);
        max_delay = std::max({max_delay, p.bs_irs[0].tau, p.irs_user[0].kappa});
        ASSERT_GE(p.bs_irs[0].tau, 0.0);
        ASSERT_GE(p.bs_irs[0].phi, 0.0);
        ASSERT_LT(p.bs_irs[0].phi, kTwoPi);
        ASSERT_GE(p.irs_user[0].d2, cfg.d2_min);
        ASSERT_LE(p.irs_user[0].d2, cfg.d2_max);
    }
    EXPECT_LE(max_delay, 100e-9);
    EXPECT_GT(max_delay, 99e-9);
}

TEST(ChannelModel, GeneratorsDistinct)
{
    const SystemConfig cfg;
    Rng rng(24);
    for (int i = 0; i < 200; ++i)
    {
        const auto comp = compose(draw_paths(cfg, rng), cfg);
        EXPECT_GT(min_generator_distance(comp, cfg), 0.0);
    }
}

TEST(ChannelModel, ComposeMapping)
{
    SystemConfig cfg;
    cfg.l = 2;
    cfg.lr = 2;
    Rng rng(25);
    const auto paths = draw_paths(cfg, rng);
    const auto comp = compose(paths, cfg);
    ASSERT_EQ(comp.size(), 4u);
    // 1-based u = 3 is (m = 2, n = 1): 0-based u = 2 -> m = 1, n = 0.
    EXPECT_EQ(comp[2].m, 1);
    EXPECT_EQ(comp[2].n, 0);
    std::set<std::pair<int, int>> seen;
    for (const auto &c : comp)
    {
        seen.insert({c.m, c.n});
        const auto &bi = paths.bs_irs[static_cast<std::size_t>(c.n)];
        const auto &iu = paths.irs_user[static_cast<std::size_t>(c.m)];
        EXPECT_EQ(c.beta, iu.rho * bi.alpha);
        EXPECT_EQ(c.iota, iu.kappa + bi.tau);
        EXPECT_EQ(c.omega_a, iu.chi_a + bi.theta_a);
        EXPECT_EQ(c.omega_e, iu.chi_e + bi.theta_e);
        EXPECT_EQ(c.phi, bi.phi);
    }
    EXPECT_EQ(seen.size(), 4u);

    cfg.l = cfg.lr = 1;
    const auto single = draw_paths(cfg, rng);
    const auto one = compose(single, cfg);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].beta, single.irs_user[0].rho * single.bs_irs[0].alpha);
}

TEST(ChannelModel, CascadeSimpleCases)
{
    SystemConfig cfg;
    cfg.mx = cfg.my = 2;
    cfg.n_bs = 3;
    cfg.p = 4;
    CompositePath unit;
    unit.beta = 1.0;
    const auto h = cascade_channels({unit}, cfg);
    ASSERT_EQ(h.size(), 4u);
    for (const auto &hp : h)
        EXPECT_LE((hp - ComplexMatrix::Ones(4, 3)).norm(), 1e-15);
    unit.beta = 0.0;
    for (const auto &hp : cascade_channels({unit}, cfg))
        EXPECT_EQ(hp.norm(), 0.0);
}

TEST(ChannelModel, CascadeTwoRoutes)
{
    // H_p from composite parameters equals diag(r_p) G_p from the per-hop paths.
    Rng rng(26);
    for (int trial = 0; trial < 20; ++trial)
    {
        SystemConfig cfg;
        cfg.p = 1 + trial % 8;
        cfg.l = 1 + trial % 3;
        cfg.lr = 1 + (trial / 3) % 3;
        const auto fc = frequency_channels(draw_paths(cfg, rng), cfg);
        ASSERT_EQ(fc.h.size(), static_cast<std::size_t>(cfg.p));
        for (int p = 0; p < cfg.p; ++p)
        {
            const ComplexMatrix two = fc.r[static_cast<std::size_t>(p)].asDiagonal() *
                                      fc.g[static_cast<std::size_t>(p)];
            EXPECT_LE(test::relative_error(fc.h[static_cast<std::size_t>(p)], two), 1e-12);
        }
    }
}

TEST(ChannelModel, DelayPhaseAndGenerator)
{
    const SystemConfig cfg;
    CompositePath c;
    c.iota = 37e-9;
    const cd z = c.generator(cfg);
    EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(delay_phase(c.iota, 3, cfg) - z * z * z), 0.0, 1e-14);
    EXPECT_EQ(delay_phase(0.0, 5, cfg), cd(1.0, 0.0));
}
