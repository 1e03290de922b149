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

#ifndef IRSCPD_TENSOR_HPP
#define IRSCPD_TENSOR_HPP

#include <array>
#include <span>
#include <vector>

#include "irscpd/types.hpp"

namespace irscpd
{

///
/// Dense complex third-order tensor.
///
/// Storage is column-major over the three modes: element (i, j, k) lives at
/// linear offset `i + d1 * (j + d2 * k)` (0-based). The first index varies
/// fastest, then the second, then the third. With this layout the mode-1
/// unfolding is the storage itself viewed as a `d1 x (d2*d3)` column-major
/// matrix, and frontal slice `k` is a contiguous `d1 x d2` block.
///
class ComplexTensor3
{
  public:
    ComplexTensor3() = default;

    /// Zero-initialised tensor. All dimensions must be positive.
    ComplexTensor3(Index d1, Index d2, Index d3);

    /// Adopts `data` laid out as documented above; size must equal d1*d2*d3.
    ComplexTensor3(Index d1, Index d2, Index d3, std::vector<cd> data);

    const std::array<Index, 3> &dims() const noexcept { return dims_; }
    Index dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
    Index size() const noexcept { return static_cast<Index>(data_.size()); }

    cd &operator()(Index i, Index j, Index k) noexcept
    {
        return data_[static_cast<std::size_t>(offset(i, j, k))];
    }
    const cd &operator()(Index i, Index j, Index k) const noexcept
    {
        return data_[static_cast<std::size_t>(offset(i, j, k))];
    }

    std::span<const cd> data() const noexcept { return data_; }
    std::span<cd> data() noexcept { return data_; }

    /// Frontal slice `k` as a d1 x d2 view.
    Eigen::Map<const ComplexMatrix> slice(Index k) const;
    Eigen::Map<ComplexMatrix> slice(Index k);

    ComplexTensor3 &operator+=(const ComplexTensor3 &other);
    ComplexTensor3 &operator-=(const ComplexTensor3 &other);
    ComplexTensor3 &operator*=(double s);

  private:
    Index offset(Index i, Index j, Index k) const noexcept
    {
        return i + dims_[0] * (j + dims_[1] * k);
    }

    std::array<Index, 3> dims_{0, 0, 0};
    std::vector<cd> data_;
};

ComplexTensor3 operator+(ComplexTensor3 lhs, const ComplexTensor3 &rhs);
ComplexTensor3 operator-(ComplexTensor3 lhs, const ComplexTensor3 &rhs);

/// Factor matrices of a rank-U CPD: A (d1 x U), B (d2 x U), C (d3 x U).
struct FactorMatrices
{
    ComplexMatrix a;
    ComplexMatrix b;
    ComplexMatrix c;

    Index rank() const noexcept { return a.cols(); }
};

/// Mode-1 unfolding Y_(1), shape d1 x (d2*d3). Column `j + d2*k` holds the
/// mode-1 fibre (:, j, k), so that Y_(1)^T = (C kr B) A^T for a CPD.
ComplexMatrix mode1_unfold(const ComplexTensor3 &t);

/// Inverse of mode1_unfold.
ComplexTensor3 mode1_fold(const ComplexMatrix &unfolded, Index d2, Index d3);

/// Frontal slices stacked as columns: (d1*d2) x d3, column k = vec(slice k).
ComplexMatrix slices_as_columns(const ComplexTensor3 &t);

/// Column-wise Kronecker product. Row index of X varies slowest:
/// out(i * Y.rows() + j, u) = X(i, u) * Y(j, u).
ComplexMatrix khatri_rao(const ComplexMatrix &x, const ComplexMatrix &y);

/// sum_u a_u o b_u o c_u. U = 0 yields the zero tensor.
ComplexTensor3 cpd_synthesize(const ComplexMatrix &a, const ComplexMatrix &b,
                              const ComplexMatrix &c);
ComplexTensor3 cpd_synthesize(const FactorMatrices &f);

double frobenius_norm(const ComplexTensor3 &t);
double squared_norm(const ComplexTensor3 &t);

} // namespace irscpd

#endif
