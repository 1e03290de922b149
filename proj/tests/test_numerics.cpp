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
#include <limits>

#include <gtest/gtest.h>

#include "irscpd/numerics.hpp"
#include "test_util.hpp"

using namespace irscpd;
using namespace irscpd::numerics;

TEST(Numerics, TruncatedSvdReconstructsLowRank)
{
    Rng rng(10);
    const ComplexMatrix m = test::random_matrix(12, 3, rng) * test::random_matrix(3, 7, rng);
    const auto svd = truncated_svd(m, 3);
    ASSERT_EQ(svd.u.cols(), 3);
    ASSERT_EQ(svd.spectrum.size(), 7);
    const ComplexMatrix rec = svd.u * svd.s.asDiagonal() * svd.v.adjoint();
    EXPECT_LE(test::relative_error(rec, m), 1e-13);
    EXPECT_LE((svd.u.adjoint() * svd.u - ComplexMatrix::Identity(3, 3)).norm(), 1e-13);
    EXPECT_LE(svd.spectrum(3), 1e-12 * svd.spectrum(0));
    EXPECT_TRUE(std::is_sorted(svd.spectrum.data(), svd.spectrum.data() + svd.spectrum.size(),
                               std::greater<>()));
    EXPECT_THROW(truncated_svd(m, 0), std::invalid_argument);
    EXPECT_THROW(truncated_svd(m, 8), std::invalid_argument);
}

TEST(Numerics, PseudoInverseSatisfiesPenroseConditions)
{
    Rng rng(11);
    for (auto [r, c, k] : {std::tuple{6, 4, 4}, std::tuple{4, 6, 4}, std::tuple{8, 8, 3}})
    {
        const ComplexMatrix a = test::random_matrix(r, k, rng) * test::random_matrix(k, c, rng);
        const ComplexMatrix x = pseudo_inverse(a);
        const double s = a.norm();
        EXPECT_LE((a * x * a - a).norm(), 1e-12 * s);
        EXPECT_LE((x * a * x - x).norm(), 1e-12 * x.norm());
        EXPECT_LE(((a * x).adjoint() - a * x).norm(), 1e-12);
        EXPECT_LE(((x * a).adjoint() - x * a).norm(), 1e-12);
    }
}

TEST(Numerics, ConditionNumber)
{
    RealVector d(3);
    d << 4.0, 2.0, 0.5;
    const ComplexMatrix m = d.cast<cd>().asDiagonal();
    EXPECT_NEAR(condition_number(m), 8.0, 1e-12);
    EXPECT_EQ(condition_number(ComplexMatrix::Zero(3, 3)), std::numeric_limits<double>::infinity());
}

TEST(Numerics, EigRecoversConstructedSpectrum)
{
    Rng rng(12);
    const auto m = test::random_matrix(4, 4, rng);
    ComplexVector z(4);
    z << std::polar(1.0, 0.3), std::polar(1.0, 1.1), std::polar(0.9, -2.0), std::polar(1.1, 2.9);
    const ComplexMatrix x = m * z.asDiagonal() * m.inverse();
    const auto e = eig_general(x);
    for (Index i = 0; i < 4; ++i)
    {
        double best = 1.0;
        for (Index j = 0; j < 4; ++j)
            best = std::min(best, std::abs(e.values(j) - z(i)));
        EXPECT_LE(best, 1e-12);
        EXPECT_NEAR(e.vectors.col(i).norm(), 1.0, 1e-14);
        EXPECT_LE((x * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm(), 1e-12);
    }
}

TEST(Numerics, EigRejectsBadInput)
{
    EXPECT_THROW(eig_general(ComplexMatrix(2, 3)), std::invalid_argument);
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 1) = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    try
    {
        eig_general(bad);
        FAIL() << "expected EstimationError";
    }
    catch (const EstimationError &e)
    {
        EXPECT_EQ(e.kind(), FailureKind::eigendecomposition);
    }
}

TEST(Numerics, AngleHelpers)
{
    EXPECT_NEAR(wrap_two_pi(-0.5), kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(wrap_two_pi(7.0), 7.0 - kTwoPi, 1e-15);
    EXPECT_NEAR(angle_difference(0.1, kTwoPi - 0.1), 0.2, 1e-15);
    EXPECT_NEAR(angle_difference(kTwoPi - 0.1, 0.1), -0.2, 1e-15);
}
