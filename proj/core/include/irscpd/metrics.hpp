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

#ifndef IRSCPD_METRICS_HPP
#define IRSCPD_METRICS_HPP

#include <vector>

#include "irscpd/channel_model.hpp"

namespace irscpd::eval
{

/// sum_p ||H^_p - H_p||_F^2 / sum_p ||H_p||_F^2.
/// Throws std::invalid_argument on shape mismatch or all-zero truth.
double nmse(const std::vector<ComplexMatrix> &estimate, const std::vector<ComplexMatrix> &truth);

/// Mean squared errors of matched paths. Angles are compared modulo 2pi,
/// delays in seconds, gains as complex differences. A parameter the
/// estimator did not produce (NaN) yields NaN.
struct ParameterErrors
{
    double omega_a = 0.0;
    double omega_e = 0.0;
    double phi = 0.0;
    double iota = 0.0;
    double beta = 0.0;
};

struct Alignment
{
    std::vector<int> truth_index;  // truth_index[i] is the truth path matched to estimate i
    ParameterErrors mse;
};

/// Minimum-cost perfect matching (Hungarian method) on a square cost matrix.
/// Returns assignment[row] = column.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd &cost);

/// Matches estimated to true composite paths by minimum total distance, where
/// the distance adds squared wrapped differences of omega_a, omega_e, phi and
/// of the delay phases 2 pi fs iota / P0. Throws on size mismatch.
Alignment align_paths(const CompositePathSet &estimate, const CompositePathSet &truth,
                      const SystemConfig &cfg);

} // namespace irscpd::eval

#endif
