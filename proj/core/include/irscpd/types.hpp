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

#ifndef IRSCPD_TYPES_HPP
#define IRSCPD_TYPES_HPP

#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irscpd
{

using cd = std::complex<double>;
using Index = Eigen::Index;

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Every random draw in the library goes through this engine type. Streams are
// seeded explicitly; nothing reads global state.
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

// Failure categories an estimator can report instead of returning garbage.
enum class FailureKind
{
    identifiability,
    eigendecomposition,
    ill_conditioned,
    rank_mismatch,
};

const char *to_string(FailureKind kind);

class EstimationError : public std::runtime_error
{
  public:
    EstimationError(FailureKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    FailureKind kind() const noexcept { return kind_; }

  private:
    FailureKind kind_;
};

// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double x);

// Signed distance between two angles, in (-pi, pi].
double angle_difference(double a, double b);

} // namespace irscpd

#endif
