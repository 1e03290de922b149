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

#ifndef IRSCPD_SOMP_HPP
#define IRSCPD_SOMP_HPP

#include <cstddef>
#include <vector>

#include "irscpd/channel_model.hpp"
#include "irscpd/tensor.hpp"
#include "irscpd/training.hpp"

namespace irscpd::somp
{

/// Grid sizes per dimension. `delay == 0` selects the angular-only
/// dictionary (subcarriers act as multiple measurement vectors); a positive
/// value adds a delay axis over [0, P0/fs) and the search becomes a single
/// measurement vector of length QTP.
struct GridSpec
{
    int irs_a = 16;
    int irs_e = 16;
    int bs = 32;
    int delay = 0;

    std::size_t atom_count() const noexcept
    {
        return static_cast<std::size_t>(irs_a) * static_cast<std::size_t>(irs_e) *
               static_cast<std::size_t>(bs) * static_cast<std::size_t>(delay > 0 ? delay : 1);
    }

    bool operator==(const GridSpec &) const = default;
};

/// Default guard on dictionary size.
inline constexpr std::size_t kDefaultAtomBudget = std::size_t{1} << 20;

struct GridPoint
{
    double omega_a = 0.0;
    double omega_e = 0.0;
    double phi = 0.0;
    double iota = 0.0;
};

///
/// Kronecker-structured dictionary. Atom (ia, ie, ib[, id]) is
///   vec_{q,t}( (V^T a_IRS(w_a, w_e)) (a_BS(phi)^T F) ),
/// optionally stacked over subcarriers with weights z(iota)^p, and scaled to
/// unit norm. Index layout: irs = ia + Ga*ie, angular = irs + Girs*ib,
/// full = angular + Gang*id. The factors are kept separately so correlations
/// never need the materialised QT x Ngrid matrix.
///
class Dictionary
{
  public:
    Dictionary(const TrainingMatrices &tm, const SystemConfig &cfg, const GridSpec &grid,
               std::size_t atom_budget = kDefaultAtomBudget);

    Index size() const noexcept { return static_cast<Index>(grid_.atom_count()); }
    Index irs_count() const noexcept { return irs_unit_.cols(); }
    Index bs_count() const noexcept { return bs_unit_.cols(); }
    bool has_delay() const noexcept { return grid_.delay > 0; }
    const GridSpec &grid() const noexcept { return grid_; }

    GridPoint point(Index atom) const;

    /// Unit-norm atom, length QT (angular) or QTP (delay-gridded).
    ComplexVector atom(Index atom) const;

    /// All atoms as columns. Subject to the same budget as construction.
    ComplexMatrix atoms() const;

    const ComplexMatrix &irs_factors() const noexcept { return irs_unit_; }  // Q x Girs, unit columns
    const ComplexMatrix &bs_factors() const noexcept { return bs_unit_; }    // T x Gbs, unit columns
    const RealVector &irs_norms() const noexcept { return irs_norm_; }
    const RealVector &bs_norms() const noexcept { return bs_norm_; }
    const ComplexMatrix &delay_factors() const noexcept { return delay_unit_; } // P x Gd, unit columns

    const SystemConfig &config() const noexcept { return cfg_; }

  private:
    SystemConfig cfg_;
    GridSpec grid_;
    ComplexMatrix irs_unit_;
    ComplexMatrix bs_unit_;
    ComplexMatrix delay_unit_;
    RealVector irs_norm_;
    RealVector bs_norm_;
    std::vector<double> omega_a_;
    std::vector<double> omega_e_;
    std::vector<double> phi_;
    std::vector<double> iota_;
};

inline Dictionary build_dictionary(const TrainingMatrices &tm, const SystemConfig &cfg,
                                   const GridSpec &grid,
                                   std::size_t atom_budget = kDefaultAtomBudget)
{
    return Dictionary(tm, cfg, grid, atom_budget);
}

struct SompResult
{
    std::vector<Index> support;            // selection order
    ComplexMatrix coefficients;            // |support| x P (angular) or |support| x 1 (delay)
    std::vector<double> residual_norms;    // ||R||_F before the first and after every iteration
    std::vector<ComplexMatrix> h;          // H^_p, p = 1..P
    std::vector<GridPoint> points;         // grid parameters of the support
};

///
/// Simultaneous OMP over the measurement matrix Y (QT x P, column p is
/// vec of frontal slice p). Each iteration picks the atom with the largest
/// sum over columns of squared correlations with the residual, then refits
/// all selected atoms jointly by least squares. Stops after k atoms or when
/// ||R||_F <= residual_tolerance * ||Y||_F.
///
SompResult somp(const ComplexMatrix &y, const Dictionary &dict, int k,
                double residual_tolerance = 0.0);

/// Convenience: SOMP on a received tensor.
SompResult somp(const ComplexTensor3 &y, const Dictionary &dict, int k,
                double residual_tolerance = 0.0);

/// Largest |<d_i, d_j>| over distinct atoms. Intended for small dictionaries.
double mutual_coherence(const Dictionary &dict);

} // namespace irscpd::somp

#endif
