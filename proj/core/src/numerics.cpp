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

#include "irscpd/numerics.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace irscpd::numerics
{

TruncatedSvd truncated_svd(const ComplexMatrix &m, Index r)
{
    const Index k = std::min(m.rows(), m.cols());
    if (r < 1 || r > k)
        throw std::invalid_argument(
            fmt::format("truncated_svd: rank {} outside [1, {}] for a {}x{} matrix", r, k,
                        m.rows(), m.cols()));
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd out;
    out.spectrum = svd.singularValues();
    out.s = out.spectrum.head(r);
    out.u = svd.matrixU().leftCols(r);
    out.v = svd.matrixV().leftCols(r);
    return out;
}

RealVector singular_values(const ComplexMatrix &m)
{
    if (m.size() == 0)
        return RealVector();
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

double default_pinv_tolerance(const ComplexMatrix &m)
{
    return static_cast<double>(std::max(m.rows(), m.cols())) *
           std::numeric_limits<double>::epsilon();
}

ComplexMatrix pseudo_inverse(const ComplexMatrix &m, std::optional<double> tol)
{
    ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
    if (m.size() == 0)
        return out;
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector &s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    if (smax == 0.0)
        return out;
    const double cutoff = tol.value_or(default_pinv_tolerance(m)) * smax;
    for (Index i = 0; i < s.size(); ++i)
    {
        if (s(i) <= cutoff)
            break;
        out.noalias() += (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).adjoint();
    }
    return out;
}

double condition_number(const ComplexMatrix &m)
{
    const RealVector s = singular_values(m);
    if (s.size() == 0)
        return std::numeric_limits<double>::infinity();
    const double smin = s(s.size() - 1);
    if (smin == 0.0)
        return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

EigenPairs eig_general(const ComplexMatrix &m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument(
            fmt::format("eig_general: matrix must be square, got {}x{}", m.rows(), m.cols()));
    if (!m.allFinite())
        throw EstimationError(FailureKind::eigendecomposition,
                              "eig_general: input contains non-finite entries");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
    if (solver.info() != Eigen::Success)
        throw EstimationError(FailureKind::eigendecomposition,
                              "eig_general: complex Schur iteration did not converge");
    EigenPairs out{solver.eigenvalues(), solver.eigenvectors()};
    for (Index u = 0; u < out.vectors.cols(); ++u)
    {
        const double n = out.vectors.col(u).norm();
        if (n > 0.0)
            out.vectors.col(u) /= n;
    }
    return out;
}

} // namespace irscpd::numerics
