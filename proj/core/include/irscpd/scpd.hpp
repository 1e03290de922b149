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

#ifndef IRSCPD_SCPD_HPP
#define IRSCPD_SCPD_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irscpd/angle_search.hpp"
#include "irscpd/channel_model.hpp"
#include "irscpd/tensor.hpp"
#include "irscpd/training.hpp"

///
/// Structured CPD channel estimator.
///
/// The noiseless measurement tensor is Y = sum_u a_u o b_u o c_u with a
/// Vandermonde third factor c_u = (z_u, z_u^2, ..., z_u^P). Because several
/// composite paths share a BS path, B has repeated columns and the generic
/// Kruskal uniqueness argument does not apply; the Vandermonde structure of C
/// does, and it also gives a closed-form decomposition:
///
///   1. thin SVD of Y_(1)^T = (C kr B) A^T at rank U, Y_(1)^T ~ U S V^H
///   2. U1 = first (P-1)T rows of U, U2 = last (P-1)T rows
///   3. eig(pinv(U1) U2) = M Z M^-1 yields the generators z_u and the mixing M
///   4. c_u from z_u, b_u by projecting (U M)(:, u) onto c_u, A by least squares
///
/// Parameters then follow from the factors: delays from arg z_u, angles by
/// correlation search against the known training matrices, gains from the
/// relative scalings of A and B.
///
namespace irscpd::scpd
{

struct IdentifiabilityReport
{
    bool kruskal_holds = false;
    bool vandermonde_condition_holds = false;
    bool dimension_check = false;
    std::vector<std::string> reasons;
};

/// Evaluates the uniqueness conditions for a rank-U tensor built from `cfg`.
/// The Kruskal test uses the generic k-ranks min(Q,U), min(P,U) and, for B,
/// min(T,U) when Lr == 1 and 1 otherwise (repeated columns).
IdentifiabilityReport check_identifiability(const SystemConfig &cfg, int u);

/// Minimum description length rank estimate on a singular spectrum.
///
/// With eigenvalues l_i = s_i^2 over p = len(s) entries and n samples,
///   MDL(k) = -n (p - k) log(g_k / a_k) + k (2p - k) log(n) / 2,
/// where g_k and a_k are the geometric and arithmetic means of l_{k+1..p}.
/// Candidates k = 1..p-1, optionally capped; ties resolve to the smallest k.
/// Throws std::invalid_argument for fewer than two values.
int estimate_rank_mdl(std::span<const double> singular_values, int sample_count,
                      std::optional<int> cap = std::nullopt);

struct DecomposeOptions
{
    double max_u1_condition = 1e12;
    bool project_generators = true;
};

struct Decomposition
{
    FactorMatrices factors;
    ComplexVector generators;      // z_u after optional unit-circle projection
    ComplexVector raw_generators;  // eigenvalues as returned by the EVD
    RealVector spectrum;           // singular values of Y_(1)^T
    double u1_condition = 0.0;
};

/// Vandermonde-structured CPD of a Q x T x P tensor at rank `rank`.
/// Throws EstimationError on identifiability violation, EVD failure, or an
/// ill-conditioned U1.
Decomposition scpd_decompose(const ComplexTensor3 &y, int rank, const DecomposeOptions &options = {});

struct ExtractOptions
{
    AngleSearchOptions angle;
    double max_steering_condition = 1e6;
    double parallel_threshold = 0.99;
};

struct EstimateDiagnostics
{
    int rank = 0;
    double u1_condition = 0.0;
    double a_tilde_condition = 0.0;
    double b_tilde_condition = 0.0;
    double psi1_offdiag_ratio = 0.0;  // ||offdiag(pinv(A~) A^)|| / ||diag(...)||
    bool a_tilde_degenerate = false;
    bool b_tilde_degenerate = false;
    double cpd_residual = 0.0;        // ||Y - [[A^, B^, C^]]|| / ||Y||
    std::vector<double> irs_scores;
    std::vector<double> bs_scores;
};

struct ChannelEstimate
{
    CompositePathSet paths;             // one entry per recovered component
    std::vector<ComplexMatrix> h;       // H^_p, p = 1..P
    EstimateDiagnostics diagnostics;
};

/// Delay from a generator, -P0 arg(z) / (2 pi fs), wrapped into [0, P0/fs).
double delay_from_generator(cd z, const SystemConfig &cfg);

/// Converts recovered factors into path parameters and rebuilds H_p.
ChannelEstimate extract_parameters(const Decomposition &dec, const TrainingMatrices &tm,
                                   const SystemConfig &cfg, const ExtractOptions &options = {});

/// Same, from bare factors; generators are read from the ratio C(1,u) and
/// projected to the unit circle.
ChannelEstimate extract_parameters(const FactorMatrices &factors, const TrainingMatrices &tm,
                                   const SystemConfig &cfg, const ExtractOptions &options = {});

enum class RankMode
{
    oracle,
    mdl,
};

struct EstimatorOptions
{
    RankMode rank_mode = RankMode::oracle;
    DecomposeOptions decompose;
    ExtractOptions extract;
};

/// Full pipeline: rank selection, decomposition, parameter extraction.
/// `oracle_rank` is used in oracle mode and ignored otherwise. MDL mode runs
/// estimate_rank_mdl on the spectrum of Y_(1)^T with sample count max(Q, TP)
/// and cap min(Q, (P-1)T).
ChannelEstimate estimate_channel(const ComplexTensor3 &y, const TrainingMatrices &tm,
                                 const SystemConfig &cfg, int oracle_rank,
                                 const EstimatorOptions &options = {});

} // namespace irscpd::scpd

#endif
