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

#include "irscpd/metrics.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace irscpd::eval
{

double nmse(const std::vector<ComplexMatrix> &estimate, const std::vector<ComplexMatrix> &truth)
{
    if (estimate.size() != truth.size())
        throw std::invalid_argument(fmt::format("nmse: {} estimated vs {} true subcarriers",
                                                estimate.size(), truth.size()));
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t p = 0; p < truth.size(); ++p)
    {
        if (estimate[p].rows() != truth[p].rows() || estimate[p].cols() != truth[p].cols())
            throw std::invalid_argument(fmt::format("nmse: shape mismatch at subcarrier {}", p + 1));
        err += (estimate[p] - truth[p]).squaredNorm();
        ref += truth[p].squaredNorm();
    }
    if (ref == 0.0)
        throw std::invalid_argument("nmse: true channel is identically zero");
    return err / ref;
}

// Shortest augmenting path formulation with row/column potentials, O(n^3).
std::vector<int> min_cost_assignment(const Eigen::MatrixXd &cost)
{
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n)
        throw std::invalid_argument("min_cost_assignment: cost matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based internals; column 0 is the virtual start.
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> match(static_cast<std::size_t>(n + 1), 0);  // match[col] = row
    std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
    for (int i = 1; i <= n; ++i)
    {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
        do
        {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j)
            {
                if (used[static_cast<std::size_t>(j)])
                    continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)])
                {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta)
                {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j)
            {
                if (used[static_cast<std::size_t>(j)])
                {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                }
                else
                {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do
        {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return assignment;
}

namespace
{

double delay_phase_difference(double a, double b, const SystemConfig &cfg)
{
    return angle_difference(kTwoPi * cfg.fs * a / cfg.p0, kTwoPi * cfg.fs * b / cfg.p0);
}

double sq_or_zero(double x)
{
    return std::isnan(x) ? 0.0 : x * x;
}

} // namespace

Alignment align_paths(const CompositePathSet &estimate, const CompositePathSet &truth,
                      const SystemConfig &cfg)
{
    if (estimate.size() != truth.size())
        throw std::invalid_argument(fmt::format("align_paths: {} estimated vs {} true paths",
                                                estimate.size(), truth.size()));
    const auto n = static_cast<Index>(truth.size());
    Alignment out;
    if (n == 0)
        return out;

    Eigen::MatrixXd cost(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
        {
            const auto &e = estimate[static_cast<std::size_t>(i)];
            const auto &t = truth[static_cast<std::size_t>(j)];
            cost(i, j) = sq_or_zero(angle_difference(e.omega_a, t.omega_a)) +
                         sq_or_zero(angle_difference(e.omega_e, t.omega_e)) +
                         sq_or_zero(angle_difference(e.phi, t.phi)) +
                         sq_or_zero(delay_phase_difference(e.iota, t.iota, cfg));
        }
    out.truth_index = min_cost_assignment(cost);

    auto &m = out.mse;
    m = {};
    for (Index i = 0; i < n; ++i)
    {
        const auto &e = estimate[static_cast<std::size_t>(i)];
        const auto &t = truth[static_cast<std::size_t>(out.truth_index[static_cast<std::size_t>(i)])];
        m.omega_a += std::pow(angle_difference(e.omega_a, t.omega_a), 2);
        m.omega_e += std::pow(angle_difference(e.omega_e, t.omega_e), 2);
        m.phi += std::pow(angle_difference(e.phi, t.phi), 2);
        m.iota += std::pow(e.iota - t.iota, 2);
        m.beta += std::norm(e.beta - t.beta);
    }
    const double dn = static_cast<double>(n);
    m.omega_a /= dn;
    m.omega_e /= dn;
    m.phi /= dn;
    m.iota /= dn;
    m.beta /= dn;
    return out;
}

} // namespace irscpd::eval
