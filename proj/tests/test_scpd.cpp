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

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "irscpd/metrics.hpp"
#include "irscpd/scpd.hpp"
#include "test_util.hpp"

using namespace irscpd;
using namespace irscpd::scpd;

namespace
{

struct Setup
{
    SystemConfig cfg;
    CompositePathSet truth;
    TrainingMatrices tm;
    ComplexTensor3 y;
    std::vector<ComplexMatrix> h;
};

Setup make_setup(const SystemConfig &cfg, std::uint64_t seed)
{
    Rng rng(seed);
    Setup s;
    s.cfg = cfg;
    s.truth = compose(draw_paths(cfg, rng), cfg);
    s.tm = gen_training(cfg, rng);
    s.h = cascade_channels(s.truth, cfg);
    s.y = synthesize_rx(s.h, s.tm);
    return s;
}

} // namespace

TEST(Mdl, ClearGap)
{
    std::vector<double> s{10, 10, 10, 10, 1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-9};
    EXPECT_EQ(estimate_rank_mdl(s, 100), 4);
}

TEST(Mdl, FlatSpectrumPicksSmallestCandidate)
{
    std::vector<double> s(8, 3.0);
    EXPECT_EQ(estimate_rank_mdl(s, 50), 1);
}

TEST(Mdl, CapAndErrors)
{
    std::vector<double> s{10, 9, 8, 7, 6, 1e-9, 1e-9};
    EXPECT_EQ(estimate_rank_mdl(s, 100), 5);
    EXPECT_EQ(estimate_rank_mdl(s, 100, 3), 3);
    EXPECT_THROW(estimate_rank_mdl(std::vector<double>{1.0}, 10), std::invalid_argument);
    EXPECT_THROW(estimate_rank_mdl(std::vector<double>{1.0, 2.0}, 10), std::invalid_argument);
}

TEST(Mdl, DetectsControlledRankFourAt20dB)
{
    // Unit-magnitude gains isolate the detector from the channel's gain spread.
    const auto cfg = test::small_config(16, 16, 16);
    int correct = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        Rng rng(1000 + static_cast<std::uint64_t>(trial));
        const auto paths = test::controlled_paths(4, rng, cfg);
        const auto tm = gen_training(cfg, rng);
        const auto rx = add_noise(synthesize_rx(cascade_channels(paths, cfg), tm), 20.0, rng);
        EstimatorOptions opts;
        opts.rank_mode = RankMode::mdl;
        if (estimate_channel(rx.y, tm, cfg, 0, opts).diagnostics.rank == 4)
            ++correct;
    }
    EXPECT_GE(correct, 95);
}

TEST(Identifiability, ReferenceSettings)
{
    const auto r = check_identifiability(test::small_config(8, 8, 8), 4);
    EXPECT_TRUE(r.dimension_check);
    EXPECT_TRUE(r.vandermonde_condition_holds);
    // Repeated B columns: the generic Kruskal argument does not apply.
    EXPECT_FALSE(r.kruskal_holds);
}

TEST(Identifiability, BoundaryAndViolation)
{
    EXPECT_TRUE(check_identifiability(test::small_config(2, 4, 4), 4).dimension_check);
    const auto r = check_identifiability(test::small_config(8, 3, 8), 4);
    EXPECT_FALSE(r.dimension_check);
    EXPECT_FALSE(r.vandermonde_condition_holds);
    EXPECT_TRUE(std::any_of(r.reasons.begin(), r.reasons.end(), [](const std::string &s) {
        return s.find("rank(A)<U possible") != std::string::npos;
    }));
    EXPECT_FALSE(check_identifiability(test::small_config(1, 8, 8), 4).vandermonde_condition_holds);
    EXPECT_TRUE(check_identifiability(test::small_config(8, 8, 8, 3, 1), 3).kruskal_holds);
}

// P = 2 leaves one Vandermonde row, so C_trimmed kr B = B diag(z) has only the
// L distinct columns of B even though (P-1)T >= U.
TEST(Identifiability, RepeatedColumnsBoundTheShiftedRank)
{
    const auto cfg = test::small_config(2, 4, 4);
    const auto r = check_identifiability(cfg, 4);
    EXPECT_TRUE(r.dimension_check);
    EXPECT_FALSE(r.vandermonde_condition_holds);

    const auto s = make_setup(cfg, 70);
    const auto f = build_factors(s.truth, s.tm, cfg);
    const ComplexMatrix kr = khatri_rao(f.c.topRows(1), f.b);
    Eigen::JacobiSVD<ComplexMatrix> svd(kr);
    const RealVector sv = svd.singularValues();
    EXPECT_LE(sv(2) / sv(0), 1e-12);  // numerical rank 2 = L

    // One BS path per composite path (Lr = 1) removes the repetition.
    EXPECT_TRUE(check_identifiability(test::small_config(2, 4, 4, 4, 1), 4)
                    .vandermonde_condition_holds);
    EXPECT_TRUE(check_identifiability(test::small_config(3, 4, 4), 4).vandermonde_condition_holds);
}

TEST(Decompose, NoiselessResidualAndShiftInvariance)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto s = make_setup(test::small_config(16, 16, 16), 50 + seed);
        const auto dec = scpd_decompose(s.y, 4);
        EXPECT_LE(test::relative_error(cpd_synthesize(dec.factors), s.y), 1e-8);
        const auto &c = dec.factors.c;
        const ComplexMatrix top = c.bottomRows(c.rows() - 1);
        const ComplexMatrix bottom = c.topRows(c.rows() - 1) * dec.generators.asDiagonal();
        EXPECT_LE((top - bottom).norm(), 1e-8);
        for (Index u = 0; u < 4; ++u)
            EXPECT_NEAR(std::abs(dec.generators(u)), 1.0, 1e-15);
    }
}

TEST(Decompose, SingleComponentGenerator)
{
    const auto s = make_setup(test::small_config(6, 4, 4, 1, 1), 60);
    const auto dec = scpd_decompose(s.y, 1);
    EXPECT_LE(std::abs(dec.generators(0) - s.truth[0].generator(s.cfg)), 1e-10);
}

TEST(Decompose, Deterministic)
{
    const auto s = make_setup(test::small_config(8, 8, 8), 61);
    const auto a = scpd_decompose(s.y, 4);
    const auto b = scpd_decompose(s.y, 4);
    EXPECT_EQ(frobenius_norm(cpd_synthesize(a.factors) - s.y),
              frobenius_norm(cpd_synthesize(b.factors) - s.y));
}

TEST(Decompose, FailuresAreDiagnosable)
{
    const auto s = make_setup(test::small_config(8, 3, 8), 62);
    try
    {
        scpd_decompose(s.y, 4);
        FAIL() << "expected EstimationError";
    }
    catch (const EstimationError &e)
    {
        EXPECT_EQ(e.kind(), FailureKind::identifiability);
        EXPECT_NE(std::string(e.what()).find("rank(A)<U possible"), std::string::npos);
    }
    const auto one = make_setup(test::small_config(1, 8, 8), 63);
    EXPECT_THROW(scpd_decompose(one.y, 2), EstimationError);
}

TEST(Extract, DelayFromGenerator)
{
    const SystemConfig cfg;
    EXPECT_EQ(delay_from_generator(cd(1.0, 0.0), cfg), 0.0);
    for (double iota : {0.0, 1e-9, 123e-9, 350e-9})
    {
        CompositePath c;
        c.iota = iota;
        EXPECT_NEAR(delay_from_generator(c.generator(cfg), cfg), iota, 1e-18);
    }
}

TEST(Extract, NoiselessSinglePathAllParameters)
{
    const auto s = make_setup(test::small_config(8, 8, 8, 1, 1), 64);
    const auto est = estimate_channel(s.y, s.tm, s.cfg, 1);
    ASSERT_EQ(est.paths.size(), 1u);
    const auto &e = est.paths[0];
    const auto &t = s.truth[0];
    EXPECT_LE(std::abs(e.iota - t.iota) * s.cfg.fs, 1e-12);
    EXPECT_LE(std::abs(angle_difference(e.omega_a, t.omega_a)), 1e-8);
    EXPECT_LE(std::abs(angle_difference(e.omega_e, t.omega_e)), 1e-8);
    EXPECT_LE(std::abs(angle_difference(e.phi, t.phi)), 1e-8);
    EXPECT_LE(std::abs(e.beta - t.beta) / std::abs(t.beta), 1e-6);
}

TEST(Extract, NoiselessEndToEnd)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto s = make_setup(test::small_config(16, 16, 16), 70 + seed);
        const auto est = estimate_channel(s.y, s.tm, s.cfg, 4);
        EXPECT_LE(eval::nmse(est.h, s.h), 1e-10) << "seed " << seed;
        EXPECT_LE(est.diagnostics.cpd_residual, 1e-8);
        const auto al = eval::align_paths(est.paths, s.truth, s.cfg);
        EXPECT_LE(al.mse.omega_a, 1e-14);
        EXPECT_LE(al.mse.phi, 1e-14);
    }
}

TEST(Extract, InvariantToJointDiagonalRescaling)
{
    const auto s = make_setup(test::small_config(16, 16, 16), 80);
    const auto dec = scpd_decompose(s.y, 4);
    const auto base = extract_parameters(dec.factors, s.tm, s.cfg);
    ComplexVector lambda(4);
    lambda << std::polar(1.0, 0.4), std::polar(1.0, -2.0), std::polar(1.0, 1.0), std::polar(1.0, 3.0);
    FactorMatrices scaled = dec.factors;
    scaled.a = scaled.a * lambda.asDiagonal();
    scaled.b = scaled.b * lambda.cwiseInverse().asDiagonal();
    const auto moved = extract_parameters(scaled, s.tm, s.cfg);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < base.h.size(); ++p)
    {
        num += (moved.h[p] - base.h[p]).squaredNorm();
        den += base.h[p].squaredNorm();
    }
    EXPECT_LE(std::sqrt(num / den), 1e-10);
}

TEST(Extract, PermutationOfComponentsDoesNotMatter)
{
    const auto s = make_setup(test::small_config(16, 16, 16), 81);
    const auto dec = scpd_decompose(s.y, 4);
    FactorMatrices perm = dec.factors;
    const std::vector<Index> order{2, 0, 3, 1};
    for (Index u = 0; u < 4; ++u)
    {
        perm.a.col(u) = dec.factors.a.col(order[static_cast<std::size_t>(u)]);
        perm.b.col(u) = dec.factors.b.col(order[static_cast<std::size_t>(u)]);
        perm.c.col(u) = dec.factors.c.col(order[static_cast<std::size_t>(u)]);
    }
    const auto est = extract_parameters(perm, s.tm, s.cfg);
    EXPECT_LE(eval::nmse(est.h, s.h), 1e-10);
    const auto al = eval::align_paths(est.paths, s.truth, s.cfg);
    EXPECT_LE(al.mse.iota * s.cfg.fs * s.cfg.fs, 1e-20);
}
