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

#ifndef IRSCPD_ANGLE_SEARCH_HPP
#define IRSCPD_ANGLE_SEARCH_HPP

#include <functional>

#include "irscpd/types.hpp"

namespace irscpd
{

///
/// Correlation-based spatial-frequency search.
///
/// The score of a candidate is the normalised correlation
/// |x^H W^T a(w)| / (||x|| ||W^T a(w)||) between an estimated factor column x
/// and the training-projected steering vector. The search evaluates a uniform
/// grid over [0, 2pi) with `oversample` points per array element, keeps the
/// best `candidates` local maxima plus any further local maxima scoring at
/// least `candidate_ratio` times the best grid score (up to `max_candidates`
/// in total; short projections have many comparable spurious peaks), and
/// polishes each with golden-section line
/// searches, one coordinate at a time. A flat peak pins its argmax down to
/// only ~sqrt(machine epsilon) through score comparisons, so the result is
/// finished with up to `newton_steps` Newton steps on the analytic gradient
/// and Hessian of the squared score, which brings it to near machine
/// precision.
///
struct AngleSearchOptions
{
    int oversample = 4;
    int candidates = 3;
    double candidate_ratio = 0.8;
    int max_candidates = 32;
    int max_sweeps = 50;     // coordinate sweeps; stops early once both moves fall below tolerance
    double tolerance = 1e-9;
    int newton_steps = 8;    // 0 disables the final Newton polish
};

/// V^T a_IRS(2pi ia/ga, 2pi ie/ge) for every grid point, Q x (ga*ge), column
/// ia + ga*ie. `v` is M x Q with M = mx*my.
ComplexMatrix projected_irs_grid(const ComplexMatrix &v, int mx, int my, int ga, int ge);

/// F^T a_BS(2pi g/size) for every grid point, T x size.
ComplexMatrix projected_bs_grid(const ComplexMatrix &f, int size);

/// Maximises f on [lo, hi] assuming it is unimodal there. Returns the abscissa.
double golden_section_max(const std::function<double(double)> &f, double lo, double hi,
                          double tolerance);

/// Squared score |x^H g|^2 / ||g||^2 with its gradient and Hessian in the angles.
struct ScoreDerivatives
{
    double f = 0.0;
    RealVector grad;
    RealMatrix hess;
};

struct IrsAngle
{
    double omega_a = 0.0;
    double omega_e = 0.0;
    double score = 0.0;
};

/// IRS (planar array) search. `v` is the M x Q phase-shift schedule.
class IrsAngleSearch
{
  public:
    IrsAngleSearch(ComplexMatrix v, int mx, int my, AngleSearchOptions options = {});

    /// V^T a_IRS(omega_a, omega_e), length Q.
    ComplexVector projected_steering(double omega_a, double omega_e) const;

    double score(const ComplexVector &x, double omega_a, double omega_e) const;

    IrsAngle search(const ComplexVector &x) const;

    ScoreDerivatives derivatives(const ComplexVector &x, double omega_a, double omega_e) const;

    int grid_a() const noexcept { return ga_; }
    int grid_e() const noexcept { return ge_; }

  private:
    ComplexVector project(const ComplexVector &ea, const ComplexVector &ee) const;

    ComplexMatrix v_;
    ComplexMatrix vt_;          // V^T, Q x M
    int mx_;
    int my_;
    AngleSearchOptions options_;
    int ga_;
    int ge_;
    ComplexMatrix grid_;        // Q x (ga*ge), column ia + ga*ie
    RealVector grid_norms_;
};

struct BsAngle
{
    double phi = 0.0;
    double score = 0.0;
};

/// BS (linear array) search. `f` is the N x T beamformer schedule.
class BsAngleSearch
{
  public:
    explicit BsAngleSearch(ComplexMatrix f, AngleSearchOptions options = {});

    /// F^T a_BS(phi), length T.
    ComplexVector projected_steering(double phi) const;

    double score(const ComplexVector &x, double phi) const;

    BsAngle search(const ComplexVector &x) const;

    ScoreDerivatives derivatives(const ComplexVector &x, double phi) const;

  private:
    ComplexMatrix f_;
    AngleSearchOptions options_;
    int grid_size_;
    ComplexMatrix grid_;        // T x grid_size
    RealVector grid_norms_;
};

} // namespace irscpd

#endif
