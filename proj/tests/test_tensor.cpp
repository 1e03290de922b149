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

#include <gtest/gtest.h>

#include "irscpd/tensor.hpp"
#include "test_util.hpp"

using namespace irscpd;

TEST(Tensor, LayoutIsFirstIndexFastest)
{
    ComplexTensor3 t(2, 3, 4);
    t(1, 2, 3) = cd(5.0, -1.0);
    EXPECT_EQ(t.data()[1 + 2 * (2 + 3 * 3)], cd(5.0, -1.0));
    EXPECT_EQ(t.slice(3)(1, 2), cd(5.0, -1.0));
}

TEST(Tensor, RejectsNonPositiveDims)
{
    EXPECT_THROW(ComplexTensor3(0, 2, 2), std::invalid_argument);
    EXPECT_THROW(ComplexTensor3(2, 2, 2, std::vector<cd>(7)), std::invalid_argument);
}

TEST(Tensor, CpdMatchesTripleLoop)
{
    Rng rng(1);
    for (int u : {1, 3, 5})
    {
        const auto a = test::random_matrix(4, u, rng);
        const auto b = test::random_matrix(3, u, rng);
        const auto c = test::random_matrix(5, u, rng);
        const auto y = cpd_synthesize(a, b, c);
        double worst = 0.0;
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 3; ++j)
                for (Index k = 0; k < 5; ++k)
                {
                    cd ref = 0.0;
                    for (Index r = 0; r < u; ++r)
                        ref += a(i, r) * b(j, r) * c(k, r);
                    worst = std::max(worst, std::abs(y(i, j, k) - ref));
                }
        EXPECT_LE(worst, 1e-13);
    }
}

TEST(Tensor, ZeroRankGivesZeroTensor)
{
    const auto y = cpd_synthesize(ComplexMatrix(2, 0), ComplexMatrix(3, 0), ComplexMatrix(4, 0));
    EXPECT_EQ(frobenius_norm(y), 0.0);
    EXPECT_EQ(y.dim(2), 4);
}

TEST(Tensor, KhatriRaoMatchesColumnwiseKronecker)
{
    Rng rng(2);
    const auto x = test::random_matrix(3, 4, rng);
    const auto y = test::random_matrix(5, 4, rng);
    const auto kr = khatri_rao(x, y);
    ASSERT_EQ(kr.rows(), 15);
    for (Index u = 0; u < 4; ++u)
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 5; ++j)
                EXPECT_EQ(kr(i * 5 + j, u), x(i, u) * y(j, u));
    EXPECT_THROW(khatri_rao(x, test::random_matrix(5, 3, rng)), std::invalid_argument);
}

TEST(Tensor, UnfoldingIdentity)
{
    // Y_(1)^T = (C kr B) A^T
    Rng rng(3);
    const auto a = test::random_matrix(4, 3, rng);
    const auto b = test::random_matrix(5, 3, rng);
    const auto c = test::random_matrix(6, 3, rng);
    const ComplexMatrix lhs = mode1_unfold(cpd_synthesize(a, b, c)).transpose();
    const ComplexMatrix rhs = khatri_rao(c, b) * a.transpose();
    EXPECT_LE(test::relative_error(lhs, rhs), 1e-14);
}

TEST(Tensor, FoldRoundTrip)
{
    Rng rng(4);
    ComplexTensor3 t(3, 4, 5);
    const auto m = test::random_matrix(3, 20, rng);
    const auto folded = mode1_fold(m, 4, 5);
    EXPECT_EQ(mode1_unfold(folded), m);
    EXPECT_THROW(mode1_fold(m, 3, 5), std::invalid_argument);
}

TEST(Tensor, SlicesAsColumnsAndArithmetic)
{
    Rng rng(5);
    const auto m = test::random_matrix(2, 12, rng);
    const auto t = mode1_fold(m, 3, 4);
    const auto cols = slices_as_columns(t);
    ASSERT_EQ(cols.rows(), 6);
    ASSERT_EQ(cols.cols(), 4);
    EXPECT_EQ(cols(1 + 2 * 2, 3), t(1, 2, 3));
    auto twice = t + t;
    twice -= t;
    EXPECT_LE(frobenius_norm(twice - t), 0.0);
    twice *= 2.0;
    EXPECT_NEAR(squared_norm(twice), 4.0 * squared_norm(t), 1e-12 * squared_norm(t));
}
