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

#include "irscpd/tensor.hpp"

#include <cmath>

#include <fmt/format.h>

namespace irscpd
{

const char *to_string(FailureKind kind)
{
    switch (kind)
    {
    case FailureKind::identifiability:
        return "identifiability";
    case FailureKind::eigendecomposition:
        return "eigendecomposition";
    case FailureKind::ill_conditioned:
        return "ill_conditioned";
    case FailureKind::rank_mismatch:
        return "rank_mismatch";
    }
    return "unknown";
}

double wrap_two_pi(double x)
{
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    // fmod of a value just below zero can round back up to 2*pi
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

double angle_difference(double a, double b)
{
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -kPi)
        d += kTwoPi;
    return d;
}

ComplexTensor3::ComplexTensor3(Index d1, Index d2, Index d3)
    : ComplexTensor3(d1, d2, d3, std::vector<cd>())
{
}

ComplexTensor3::ComplexTensor3(Index d1, Index d2, Index d3, std::vector<cd> data)
    : dims_{d1, d2, d3}, data_(std::move(data))
{
    if (d1 <= 0 || d2 <= 0 || d3 <= 0)
        throw std::invalid_argument(
            fmt::format("ComplexTensor3: dimensions must be positive, got {}x{}x{}", d1, d2, d3));
    const auto n = static_cast<std::size_t>(d1 * d2 * d3);
    if (data_.empty())
        data_.assign(n, cd(0.0, 0.0));
    else if (data_.size() != n)
        throw std::invalid_argument(fmt::format(
            "ComplexTensor3: data length {} does not match {}x{}x{}", data_.size(), d1, d2, d3));
}

Eigen::Map<const ComplexMatrix> ComplexTensor3::slice(Index k) const
{
    return {data_.data() + dims_[0] * dims_[1] * k, dims_[0], dims_[1]};
}

Eigen::Map<ComplexMatrix> ComplexTensor3::slice(Index k)
{
    return {data_.data() + dims_[0] * dims_[1] * k, dims_[0], dims_[1]};
}

namespace
{
void require_same_dims(const ComplexTensor3 &a, const ComplexTensor3 &b)
{
    if (a.dims() != b.dims())
        throw std::invalid_argument("ComplexTensor3: dimension mismatch");
}
} // namespace

ComplexTensor3 &ComplexTensor3::operator+=(const ComplexTensor3 &other)
{
    require_same_dims(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

ComplexTensor3 &ComplexTensor3::operator-=(const ComplexTensor3 &other)
{
    require_same_dims(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

ComplexTensor3 &ComplexTensor3::operator*=(double s)
{
    for (auto &x : data_)
        x *= s;
    return *this;
}

ComplexTensor3 operator+(ComplexTensor3 lhs, const ComplexTensor3 &rhs)
{
    lhs += rhs;
    return lhs;
}

ComplexTensor3 operator-(ComplexTensor3 lhs, const ComplexTensor3 &rhs)
{
    lhs -= rhs;
    return lhs;
}

ComplexMatrix mode1_unfold(const ComplexTensor3 &t)
{
    const auto &d = t.dims();
    return Eigen::Map<const ComplexMatrix>(t.data().data(), d[0], d[1] * d[2]);
}

ComplexTensor3 mode1_fold(const ComplexMatrix &unfolded, Index d2, Index d3)
{
    if (d2 <= 0 || d3 <= 0 || unfolded.cols() != d2 * d3)
        throw std::invalid_argument(fmt::format("mode1_fold: {} columns cannot fold into {}x{}",
                                                unfolded.cols(), d2, d3));
    std::vector<cd> data(unfolded.data(), unfolded.data() + unfolded.size());
    return ComplexTensor3(unfolded.rows(), d2, d3, std::move(data));
}

ComplexMatrix slices_as_columns(const ComplexTensor3 &t)
{
    const auto &d = t.dims();
    return Eigen::Map<const ComplexMatrix>(t.data().data(), d[0] * d[1], d[2]);
}

ComplexMatrix khatri_rao(const ComplexMatrix &x, const ComplexMatrix &y)
{
    if (x.cols() != y.cols())
        throw std::invalid_argument(
            fmt::format("khatri_rao: column counts differ ({} vs {})", x.cols(), y.cols()));
    ComplexMatrix out(x.rows() * y.rows(), x.cols());
    for (Index u = 0; u < x.cols(); ++u)
        for (Index i = 0; i < x.rows(); ++i)
            out.col(u).segment(i * y.rows(), y.rows()) = x(i, u) * y.col(u);
    return out;
}

ComplexTensor3 cpd_synthesize(const ComplexMatrix &a, const ComplexMatrix &b,
                              const ComplexMatrix &c)
{
    if (a.cols() != b.cols() || a.cols() != c.cols())
        throw std::invalid_argument(fmt::format(
            "cpd_synthesize: factor column counts differ ({}, {}, {})", a.cols(), b.cols(), c.cols()));
    ComplexTensor3 t(a.rows(), b.rows(), c.rows());
    if (a.cols() == 0)
        return t;
    // Y_(1) = A (C kr B)^T
    const ComplexMatrix unfolded = a * khatri_rao(c, b).transpose();
    std::copy(unfolded.data(), unfolded.data() + unfolded.size(), t.data().begin());
    return t;
}

ComplexTensor3 cpd_synthesize(const FactorMatrices &f)
{
    return cpd_synthesize(f.a, f.b, f.c);
}

double squared_norm(const ComplexTensor3 &t)
{
    double s = 0.0;
    for (const auto &x : t.data())
        s += std::norm(x);
    return s;
}

double frobenius_norm(const ComplexTensor3 &t)
{
    return std::sqrt(squared_norm(t));
}

} // namespace irscpd
