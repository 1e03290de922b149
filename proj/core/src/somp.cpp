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

#include "irscpd/somp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "irscpd/angle_search.hpp"

namespace irscpd::somp
{

namespace
{

void normalize_columns(ComplexMatrix &m, RealVector &norms)
{
    norms = m.colwise().norm().transpose();
    for (Index j = 0; j < m.cols(); ++j)
        if (norms(j) > 0.0)
            m.col(j) /= norms(j);
}

double max_offdiag_abs(const ComplexMatrix &unit_columns)
{
    const ComplexMatrix gram = unit_columns.adjoint() * unit_columns;
    double worst = 0.0;
    for (Index j = 0; j < gram.cols(); ++j)
        for (Index i = 0; i < gram.rows(); ++i)
            if (i != j)
                worst = std::max(worst, std::abs(gram(i, j)));
    return worst;
}

} // namespace

Dictionary::Dictionary(const TrainingMatrices &tm, const SystemConfig &cfg, const GridSpec &grid,
                       std::size_t atom_budget)
    : cfg_(cfg), grid_(grid)
{
    if (grid.irs_a < 1 || grid.irs_e < 1 || grid.bs < 1 || grid.delay < 0)
        throw std::invalid_argument(fmt::format("Dictionary: grid sizes must be positive, got ({}x{})x{}x{}",
                                                grid.irs_a, grid.irs_e, grid.bs, grid.delay));
    if (grid.atom_count() > atom_budget)
        throw std::length_error(fmt::format(
            "Dictionary: grid ({}x{})x{}{} has {} atoms, above the budget of {}; "
            "use a coarser grid or raise the atom budget",
            grid.irs_a, grid.irs_e, grid.bs, grid.delay > 0 ? fmt::format("x{}", grid.delay) : "",
            grid.atom_count(), atom_budget));
    if (tm.v.rows() != cfg.m() || tm.f.rows() != cfg.n_bs)
        throw std::invalid_argument("Dictionary: training matrices do not match the configuration");

    irs_unit_ = projected_irs_grid(tm.v, cfg.mx, cfg.my, grid.irs_a, grid.irs_e);
    normalize_columns(irs_unit_, irs_norm_);
    bs_unit_ = projected_bs_grid(tm.f, grid.bs);
    normalize_columns(bs_unit_, bs_norm_);

    omega_a_.resize(static_cast<std::size_t>(grid.irs_a));
    for (int i = 0; i < grid.irs_a; ++i)
        omega_a_[static_cast<std::size_t>(i)] = kTwoPi * i / grid.irs_a;
    omega_e_.resize(static_cast<std::size_t>(grid.irs_e));
    for (int i = 0; i < grid.irs_e; ++i)
        omega_e_[static_cast<std::size_t>(i)] = kTwoPi * i / grid.irs_e;
    phi_.resize(static_cast<std::size_t>(grid.bs));
    for (int i = 0; i < grid.bs; ++i)
        phi_[static_cast<std::size_t>(i)] = kTwoPi * i / grid.bs;

    if (grid.delay > 0)
    {
        const double period = cfg.unambiguous_delay();
        iota_.resize(static_cast<std::size_t>(grid.delay));
        delay_unit_.resize(cfg.p, grid.delay);
        const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.p));
        for (int d = 0; d < grid.delay; ++d)
        {
            iota_[static_cast<std::size_t>(d)] = period * d / grid.delay;
            for (int p = 1; p <= cfg.p; ++p)
                delay_unit_(p - 1, d) = scale * delay_phase(iota_[static_cast<std::size_t>(d)], p, cfg);
        }
    }
}

GridPoint Dictionary::point(Index atom) const
{
    if (atom < 0 || atom >= size())
        throw std::out_of_range("Dictionary::point: atom index out of range");
    const Index irs = atom % irs_count();
    const Index rest = atom / irs_count();
    const Index ib = rest % bs_count();
    const Index id = rest / bs_count();
    GridPoint g;
    g.omega_a = omega_a_[static_cast<std::size_t>(irs % grid_.irs_a)];
    g.omega_e = omega_e_[static_cast<std::size_t>(irs / grid_.irs_a)];
    g.phi = phi_[static_cast<std::size_t>(ib)];
    g.iota = has_delay() ? iota_[static_cast<std::size_t>(id)]
                         : std::numeric_limits<double>::quiet_NaN();
    return g;
}

ComplexVector Dictionary::atom(Index atom) const
{
    if (atom < 0 || atom >= size())
        throw std::out_of_range("Dictionary::atom: atom index out of range");
    const Index irs = atom % irs_count();
    const Index rest = atom / irs_count();
    const Index ib = rest % bs_count();
    const Index id = rest / bs_count();
    const Index q = irs_unit_.rows();
    const Index t = bs_unit_.rows();
    ComplexVector angular(q * t);
    for (Index j = 0; j < t; ++j)
        angular.segment(j * q, q) = bs_unit_(j, ib) * irs_unit_.col(irs);
    if (!has_delay())
        return angular;
    ComplexVector out(q * t * delay_unit_.rows());
    for (Index p = 0; p < delay_unit_.rows(); ++p)
        out.segment(p * q * t, q * t) = delay_unit_(p, id) * angular;
    return out;
}

ComplexMatrix Dictionary::atoms() const
{
    const Index len = irs_unit_.rows() * bs_unit_.rows() * (has_delay() ? delay_unit_.rows() : 1);
    ComplexMatrix out(len, size());
    for (Index i = 0; i < size(); ++i)
        out.col(i) = atom(i);
    return out;
}

namespace
{

struct Selection
{
    Index atom = -1;
    double score = -1.0;
};

// Per-subcarrier correlations K_p = I^H R_p conj(B), each Girs x Gbs.
std::vector<ComplexMatrix> slice_correlations(const ComplexMatrix &residual, const Dictionary &dict,
                                              Index q, Index t, Index p_count)
{
    const ComplexMatrix bs_conj = dict.bs_factors().conjugate();
    std::vector<ComplexMatrix> k(static_cast<std::size_t>(p_count));
    for (Index p = 0; p < p_count; ++p)
    {
        const Eigen::Map<const ComplexMatrix> rp(residual.data() + p * q * t, q, t);
        k[static_cast<std::size_t>(p)] = (dict.irs_factors().adjoint() * rp) * bs_conj;
    }
    return k;
}

Selection best_atom(const ComplexMatrix &residual, const Dictionary &dict, Index q, Index t,
                    Index p_count, const std::vector<char> &taken)
{
    const auto k = slice_correlations(residual, dict, q, t, p_count);
    const Index gi = dict.irs_count();
    const Index gb = dict.bs_count();
    Selection best;
    if (!dict.has_delay())
    {
        Eigen::MatrixXd score = Eigen::MatrixXd::Zero(gi, gb);
        for (const auto &kp : k)
            score += kp.cwiseAbs2();
        for (Index ib = 0; ib < gb; ++ib)
            for (Index ii = 0; ii < gi; ++ii)
            {
                const Index idx = ii + gi * ib;
                if (!taken[static_cast<std::size_t>(idx)] && score(ii, ib) > best.score)
                    best = {idx, score(ii, ib)};
            }
        return best;
    }
    const auto &c = dict.delay_factors();
    for (Index d = 0; d < c.cols(); ++d)
    {
        ComplexMatrix acc = ComplexMatrix::Zero(gi, gb);
        for (Index p = 0; p < p_count; ++p)
            acc += std::conj(c(p, d)) * k[static_cast<std::size_t>(p)];
        for (Index ib = 0; ib < gb; ++ib)
            for (Index ii = 0; ii < gi; ++ii)
            {
                const Index idx = ii + gi * (ib + gb * d);
                const double s = std::norm(acc(ii, ib));
                if (!taken[static_cast<std::size_t>(idx)] && s > best.score)
                    best = {idx, s};
            }
    }
    return best;
}

} // namespace

SompResult somp(const ComplexMatrix &y, const Dictionary &dict, int k, double residual_tolerance)
{
    if (k < 1)
        throw std::invalid_argument("somp: sparsity k must be at least 1");
    if (k > dict.size())
        throw std::invalid_argument(
            fmt::format("somp: sparsity {} exceeds dictionary size {}", k, dict.size()));
    const auto &cfg = dict.config();
    const Index q = dict.irs_factors().rows();
    const Index t = dict.bs_factors().rows();
    const Index p_count = cfg.p;
    if (y.rows() != q * t || y.cols() != p_count)
        throw std::invalid_argument(fmt::format("somp: measurements are {}x{}, expected {}x{}",
                                                y.rows(), y.cols(), q * t, p_count));

    // Delay-gridded mode works on the single stacked vector of length QTP.
    const ComplexMatrix target =
        dict.has_delay() ? ComplexMatrix(Eigen::Map<const ComplexMatrix>(y.data(), y.size(), 1)) : y;

    SompResult out;
    ComplexMatrix residual = target;
    const double y_norm = target.norm();
    out.residual_norms.push_back(residual.norm());
    std::vector<char> taken(static_cast<std::size_t>(dict.size()), 0);
    ComplexMatrix selected(target.rows(), 0);

    while (static_cast<int>(out.support.size()) < k)
    {
        if (residual.norm() <= residual_tolerance * y_norm)
            break;
        const auto pick = best_atom(residual, dict, q, t, p_count, taken);
        if (pick.atom < 0)
            break;
        taken[static_cast<std::size_t>(pick.atom)] = 1;
        out.support.push_back(pick.atom);
        selected.conservativeResize(Eigen::NoChange, selected.cols() + 1);
        selected.col(selected.cols() - 1) = dict.atom(pick.atom);
        out.coefficients = selected.completeOrthogonalDecomposition().solve(target);
        residual = target - selected * out.coefficients;
        out.residual_norms.push_back(residual.norm());
    }

    // Coefficient x on a unit atom equals beta z^p times the atom's norm
    // factors; undo the normalisation when assembling H_p.
    out.h.assign(static_cast<std::size_t>(p_count), ComplexMatrix::Zero(cfg.m(), cfg.n_bs));
    const double delay_scale = dict.has_delay() ? std::sqrt(static_cast<double>(p_count)) : 1.0;
    for (std::size_t s = 0; s < out.support.size(); ++s)
    {
        const Index atom = out.support[s];
        const auto g = dict.point(atom);
        out.points.push_back(g);
        const Index irs = atom % dict.irs_count();
        const Index ib = (atom / dict.irs_count()) % dict.bs_count();
        const double norm = dict.irs_norms()(irs) * dict.bs_norms()(ib) * delay_scale;
        const ComplexMatrix outer =
            steer_irs(g.omega_a, g.omega_e, cfg.mx, cfg.my) * steer_bs(g.phi, cfg.n_bs).transpose();
        const auto si = static_cast<Index>(s);
        for (Index p = 0; p < p_count; ++p)
        {
            const cd x = dict.has_delay()
                             ? out.coefficients(si, 0) * delay_phase(g.iota, static_cast<int>(p + 1), cfg)
                             : out.coefficients(si, p);
            out.h[static_cast<std::size_t>(p)] += (x / norm) * outer;
        }
    }
    return out;
}

SompResult somp(const ComplexTensor3 &y, const Dictionary &dict, int k, double residual_tolerance)
{
    return somp(slices_as_columns(y), dict, k, residual_tolerance);
}

double mutual_coherence(const Dictionary &dict)
{
    // |<d_i, d_j>| factorises over the Kronecker components, and every factor
    // has unit-norm columns, so the maximum over atom pairs is the largest
    // off-diagonal Gram entry of any single factor.
    double mu = std::max(max_offdiag_abs(dict.irs_factors()), max_offdiag_abs(dict.bs_factors()));
    if (dict.has_delay())
        mu = std::max(mu, max_offdiag_abs(dict.delay_factors()));
    return mu;
}

} // namespace irscpd::somp
