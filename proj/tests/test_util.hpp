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

// Helpers shared by the unit tests.

#ifndef IRSCPD_TESTS_TEST_UTIL_HPP
#define IRSCPD_TESTS_TEST_UTIL_HPP

#include <random>

#include "irscpd/channel_model.hpp"
#include "irscpd/tensor.hpp"
#include "irscpd/training.hpp"

namespace irscpd::test
{

inline ComplexMatrix random_matrix(Index rows, Index cols, Rng &rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i)
        m.data()[i] = cd(n(rng), n(rng));
    return m;
}

inline double relative_error(const ComplexMatrix &est, const ComplexMatrix &ref)
{
    return (est - ref).norm() / ref.norm();
}

inline double relative_error(const ComplexTensor3 &est, const ComplexTensor3 &ref)
{
    return frobenius_norm(est - ref) / frobenius_norm(ref);
}

inline SystemConfig small_config(int p, int q, int t, int l = 2, int lr = 2)
{
    SystemConfig cfg;
    cfg.p = p;
    cfg.q = q;
    cfg.t = t;
    cfg.l = l;
    cfg.lr = lr;
    return cfg;
}

/// Composite paths with unit-magnitude gains and well separated delays, for
/// tests that exercise an estimator rather than the channel statistics.
inline CompositePathSet controlled_paths(int u, Rng &rng, const SystemConfig &cfg)
{
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    CompositePathSet paths(static_cast<std::size_t>(u));
    const double span = 0.5 * cfg.unambiguous_delay();
    for (int i = 0; i < u; ++i)
    {
        auto &p = paths[static_cast<std::size_t>(i)];
        p.beta = std::polar(1.0, angle(rng));
        p.iota = span * (i + 0.5) / u;
        p.omega_a = angle(rng);
        p.omega_e = angle(rng);
        p.phi = angle(rng);
    }
    return paths;
}

} // namespace irscpd::test

#endif
