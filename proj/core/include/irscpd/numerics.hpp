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

#ifndef IRSCPD_NUMERICS_HPP
#define IRSCPD_NUMERICS_HPP

#include <optional>

#include "irscpd/types.hpp"

/// Dense complex factorizations. Eigen does the heavy lifting; this layer
/// fixes the contracts (truncation, tolerances, failure reporting).
namespace irscpd::numerics
{

struct TruncatedSvd
{
    ComplexMatrix u;       // m x r, orthonormal columns
    RealVector s;          // r leading singular values, descending
    ComplexMatrix v;       // n x r, orthonormal columns
    RealVector spectrum;   // all min(m, n) singular values, descending
};

/// Rank-r truncated SVD. Throws std::invalid_argument unless 1 <= r <= min(m, n).
TruncatedSvd truncated_svd(const ComplexMatrix &m, Index r);

/// All singular values, descending.
RealVector singular_values(const ComplexMatrix &m);

/// max(rows, cols) * machine epsilon.
double default_pinv_tolerance(const ComplexMatrix &m);

/// Moore-Penrose pseudo-inverse. Singular values below `tol * max(S)` are
/// treated as zero; `tol` defaults to default_pinv_tolerance(m).
ComplexMatrix pseudo_inverse(const ComplexMatrix &m, std::optional<double> tol = std::nullopt);

/// 2-norm condition number sigma_max / sigma_min; infinity when rank deficient.
double condition_number(const ComplexMatrix &m);

struct EigenPairs
{
    ComplexVector values;
    ComplexMatrix vectors; // column u pairs with values(u), unit 2-norm
};

/// Eigendecomposition of a general (non-normal) complex square matrix.
/// Throws std::invalid_argument for non-square input and EstimationError
/// (FailureKind::eigendecomposition) when the QR iteration does not converge.
EigenPairs eig_general(const ComplexMatrix &m);

} // namespace irscpd::numerics

#endif
