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

#ifndef IRSCPD_TRAINING_HPP
#define IRSCPD_TRAINING_HPP

#include <limits>
#include <vector>

#include "irscpd/channel_model.hpp"
#include "irscpd/tensor.hpp"

namespace irscpd
{

/// IRS phase-shift schedule and BS beamformer schedule for one training burst.
struct TrainingMatrices
{
    ComplexMatrix v;  // M x Q, unit-modulus entries, column q used in slot q
    ComplexMatrix f;  // N x T, unit-norm columns, column t used in frame t
};

/// Training measurements. `y` is signal plus noise; `noise` is the exact
/// noise realisation that was added. Both are Q x T x P.
struct ReceivedTensor
{
    ComplexTensor3 y;
    ComplexTensor3 noise;
    double snr_db = std::numeric_limits<double>::infinity();

    ComplexTensor3 signal() const { return y - noise; }
};

/// V entries exp(j gamma), F entries exp(j theta)/sqrt(N), phases uniform on [0, 2pi).
TrainingMatrices gen_training(const SystemConfig &cfg, Rng &rng);

/// y[q, t, p] = v_q^T H_p f(t), evaluated directly per subcarrier.
ComplexTensor3 synthesize_rx(const std::vector<ComplexMatrix> &h, const TrainingMatrices &tm);

/// Factor matrices of the noiseless tensor:
///   A = V^T A_IRS                          (Q x U)
///   B(:, u) = beta_u F^T a_BS(phi_u)       (T x U)
///   C(p, u) = z_u^p, p = 1..P              (P x U)
FactorMatrices build_factors(const CompositePathSet &paths, const TrainingMatrices &tm,
                             const SystemConfig &cfg);

/// Adds circular Gaussian noise scaled so that the realised ratio
/// ||y||^2 / ||noise||^2 equals 10^(snr_db/10) exactly. snr_db = +inf adds
/// nothing. Throws std::invalid_argument on an all-zero signal.
ReceivedTensor add_noise(const ComplexTensor3 &clean, double snr_db, Rng &rng);

/// 10 log10(||y - noise||^2 / ||noise||^2).
double realized_snr_db(const ReceivedTensor &rx);

} // namespace irscpd

#endif
