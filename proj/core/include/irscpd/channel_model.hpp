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

#ifndef IRSCPD_CHANNEL_MODEL_HPP
#define IRSCPD_CHANNEL_MODEL_HPP

#include <vector>

#include "irscpd/types.hpp"

namespace irscpd
{

///
/// Scalar constants of one IRS-assisted OFDM link.
///
/// Defaults reproduce the reference simulation setup: 64-antenna ULA at the
/// BS with one RF chain, 16 x 16 IRS, 128 subcarriers sampled at 320 MHz,
/// 28 GHz carrier, 30 m BS-IRS distance, two paths per hop.
///
struct SystemConfig
{
    int n_bs = 64;       // BS antennas
    int mx = 16;         // IRS elements along x
    int my = 16;         // IRS elements along y
    int rf_chains = 1;   // informational
    int p0 = 128;        // total subcarriers
    int p = 8;           // training subcarriers, indices 1..p
    int q = 8;           // IRS slots per frame
    int t = 8;           // frames (BS beamformers)
    double fs = 0.32e9;  // sample rate, Hz
    double fc = 28e9;    // carrier, Hz
    int l = 2;           // BS-IRS paths
    int lr = 2;          // IRS-user paths
    double d1 = 30.0;    // BS-IRS distance, m
    double d2_min = 10.0;          // IRS-user path length range, m
    double d2_max = 30.0;
    double max_path_delay = 100e-9; // per-hop delays drawn on [0, max_path_delay], s

    int m() const noexcept { return mx * my; }
    int u() const noexcept { return l * lr; }

    /// Longest composite delay that can be recovered without phase wrap, P0/fs.
    double unambiguous_delay() const noexcept { return p0 / fs; }

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    bool operator==(const SystemConfig &) const = default;
};

/// One BS -> IRS path. Angles are spatial frequencies (rad per element).
struct BsIrsPath
{
    cd alpha;
    double phi = 0.0;      // AoD at the BS
    double theta_a = 0.0;  // AoA at the IRS, azimuth
    double theta_e = 0.0;  // AoA at the IRS, elevation
    double tau = 0.0;      // delay, s
};

/// One IRS -> user path.
struct IrsUserPath
{
    cd rho;
    double chi_a = 0.0;
    double chi_e = 0.0;
    double kappa = 0.0;    // delay, s
    double d2 = 0.0;       // path length used for the gain variance, m
};

struct PathSet
{
    std::vector<BsIrsPath> bs_irs;
    std::vector<IrsUserPath> irs_user;
};

/// Parameters of one composite BS -> IRS -> user path.
struct CompositePath
{
    cd beta;
    double iota = 0.0;     // composite delay, s
    double omega_a = 0.0;
    double omega_e = 0.0;
    double phi = 0.0;
    int m = -1;            // source IRS-user path (0-based), -1 when not from a PathSet
    int n = -1;            // source BS-IRS path (0-based)

    /// Vandermonde generator exp(-j 2 pi fs iota / P0).
    cd generator(const SystemConfig &cfg) const;
};

using CompositePathSet = std::vector<CompositePath>;

/// Per-subcarrier channels for p = 1..P (stored at index p-1).
struct FrequencyChannels
{
    std::vector<ComplexMatrix> g;  // BS-IRS, M x N
    std::vector<ComplexVector> r;  // IRS-user, M
    std::vector<ComplexMatrix> h;  // cascade, M x N
};

/// exp(-j 2 pi fs delay p / P0), the phase of subcarrier p for a given delay.
cd delay_phase(double delay, int p, const SystemConfig &cfg);

/// BS ULA response: entry n is exp(j n phi).
ComplexVector steer_bs(double phi, int n);

/// IRS UPA response: entry mx + Mx*my is exp(j (mx*omega_a + my*omega_e)).
/// The exponential form makes steer_irs(a+a', e+e') the elementwise product
/// of steer_irs(a, e) and steer_irs(a', e').
ComplexVector steer_irs(double omega_a, double omega_e, int mx, int my);

/// Physical angle to spatial frequency for half-wavelength spacing, pi*sin(theta).
double spatial_frequency(double theta);

/// Draws one random channel realisation. Angles are uniform on [0, 2pi),
/// per-hop delays uniform on [0, max_path_delay], gains circular Gaussian
/// with free-space variance. Delays are redrawn until every pair of composite
/// generators is separated by more than `min_generator_separation` radians.
PathSet draw_paths(const SystemConfig &cfg, Rng &rng, double min_generator_separation = 1e-6);

/// Composite index u = m*L + n (0-based), i.e. path u pairs IRS-user path
/// m = u / L with BS-IRS path n = u % L.
CompositePathSet compose(const PathSet &paths, const SystemConfig &cfg);

/// Cascade channels H_p = sum_u beta_u z_u^p a_IRS(omega_u) a_BS(phi_u)^T, p = 1..P.
std::vector<ComplexMatrix> cascade_channels(const CompositePathSet &paths,
                                            const SystemConfig &cfg);

/// Per-hop G_p, r_p from the raw paths together with H_p from the composite
/// parameters. H_p = diag(r_p) G_p up to rounding.
FrequencyChannels frequency_channels(const PathSet &paths, const SystemConfig &cfg);

/// Smallest pairwise distance |z_i - z_j| between composite generators.
double min_generator_distance(const CompositePathSet &paths, const SystemConfig &cfg);

} // namespace irscpd

#endif
