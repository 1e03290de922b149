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

#include "irscpd/scpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "irscpd/numerics.hpp"

namespace irscpd::scpd
{

IdentifiabilityReport check_identifiability(const SystemConfig &cfg, int u)
{
    IdentifiabilityReport r;
    const long long shifted_rows = static_cast<long long>(cfg.p - 1) * cfg.t;
    r.dimension_check = u >= 1 && std::min<long long>(shifted_rows, cfg.q) >= u;

    bool vandermonde = u >= 1;
    if (u < 1)
        r.reasons.emplace_back("rank must be at least 1");
    if (cfg.p < 2)
    {
        vandermonde = false;
        r.reasons.emplace_back("P < 2: no shift invariance across subcarriers");
    }
    if (shifted_rows < u)
    {
        vandermonde = false;
        r.reasons.push_back(fmt::format(
            "(P-1)T = {} < U = {}: rank(C_trimmed kr B) < U possible", shifted_rows, u));
    }
    // Composite paths that share a BS path share a column of B, so each group
    // of Lr columns spans at most min(P-1, Lr) dimensions of C_trimmed kr B.
    if (u == cfg.u() && cfg.p >= 2)
    {
        const long long structured = std::min<long long>(
            shifted_rows, static_cast<long long>(cfg.l) * std::min(cfg.p - 1, cfg.lr));
        if (structured < u && shifted_rows >= u)
        {
            vandermonde = false;
            r.reasons.push_back(fmt::format(
                "repeated B columns: rank(C_trimmed kr B) <= L min(P-1, Lr) = {} < U = {}",
                structured, u));
        }
    }
    if (cfg.q < u)
    {
        vandermonde = false;
        r.reasons.push_back(fmt::format("Q = {} < U = {}: rank(A)<U possible", cfg.q, u));
    }
    r.vandermonde_condition_holds = vandermonde;

    const int k_a = std::min(cfg.q, u);
    const int k_b = cfg.lr == 1 ? std::min(cfg.t, u) : 1;
    const int k_c = std::min(cfg.p, u);
    r.kruskal_holds = u >= 1 && k_a + k_b + k_c >= 2 * u + 2;
    if (!r.kruskal_holds)
        r.reasons.push_back(fmt::format(
            "Kruskal: k_A + k_B + k_C = {} + {} + {} < 2U + 2 = {}{}", k_a, k_b, k_c, 2 * u + 2,
            cfg.lr == 1 ? "" : " (B has repeated columns, k_B = 1)"));
    return r;
}

int estimate_rank_mdl(std::span<const double> singular_values, int sample_count,
                      std::optional<int> cap)
{
    const int p = static_cast<int>(singular_values.size());
    if (p < 2)
        throw std::invalid_argument("estimate_rank_mdl: need at least two singular values");
    if (sample_count < 1)
        throw std::invalid_argument("estimate_rank_mdl: sample count must be positive");

    std::vector<double> lambda(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
    {
        const double s = singular_values[static_cast<std::size_t>(i)];
        if (s < 0.0 || (i > 0 && s > singular_values[static_cast<std::size_t>(i - 1)]))
            throw std::invalid_argument("estimate_rank_mdl: values must be nonnegative and descending");
        lambda[static_cast<std::size_t>(i)] = s * s;
    }
    const double floor = std::max(lambda.front() * 1e-30, std::numeric_limits<double>::min());

    int k_max = p - 1;
    if (cap)
        k_max = std::clamp(*cap, 1, k_max);

    const double n = sample_count;
    const double log_n = std::log(n);
    int best_k = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k)
    {
        const int tail = p - k;
        double sum = 0.0;
        double log_sum = 0.0;
        for (int i = k; i < p; ++i)
        {
            const double l = std::max(lambda[static_cast<std::size_t>(i)], floor);
            sum += l;
            log_sum += std::log(l);
        }
        const double log_ratio = log_sum / tail - std::log(sum / tail);
        const double cost = -n * tail * log_ratio + 0.5 * k * (2.0 * p - k) * log_n;
        if (cost < best_cost)
        {
            best_cost = cost;
            best_k = k;
        }
    }
    return best_k;
}

namespace
{

ComplexMatrix vandermonde_columns(const ComplexVector &z, Index rows)
{
    ComplexMatrix c(rows, z.size());
    for (Index u = 0; u < z.size(); ++u)
    {
        cd power = z(u);
        for (Index p = 0; p < rows; ++p)
        {
            c(p, u) = power;
            power *= z(u);
        }
    }
    return c;
}

ComplexMatrix unit_vandermonde_columns(const ComplexVector &z, Index rows)
{
    ComplexMatrix c(rows, z.size());
    for (Index u = 0; u < z.size(); ++u)
    {
        const double theta = std::arg(z(u));
        for (Index p = 0; p < rows; ++p)
            c(p, u) = std::polar(1.0, theta * static_cast<double>(p + 1));
    }
    return c;
}

double max_abs_cosine(const ComplexMatrix &m)
{
    double worst = 0.0;
    for (Index i = 0; i < m.cols(); ++i)
        for (Index j = i + 1; j < m.cols(); ++j)
        {
            const double ni = m.col(i).norm();
            const double nj = m.col(j).norm();
            if (ni == 0.0 || nj == 0.0)
                return 1.0;
            worst = std::max(worst, std::abs(m.col(i).dot(m.col(j))) / (ni * nj));
        }
    return worst;
}

// Column-wise least-squares scale of `target` onto `basis`: (b_u^H t_u) / ||b_u||^2.
ComplexVector columnwise_scale(const ComplexMatrix &basis, const ComplexMatrix &target)
{
    ComplexVector s(basis.cols());
    for (Index u = 0; u < basis.cols(); ++u)
    {
        const double n2 = basis.col(u).squaredNorm();
        s(u) = n2 > 0.0 ? basis.col(u).dot(target.col(u)) / n2 : cd(0.0, 0.0);
    }
    return s;
}

} // namespace

Decomposition scpd_decompose(const ComplexTensor3 &y, int rank, const DecomposeOptions &options)
{
    const Index q = y.dim(0);
    const Index t = y.dim(1);
    const Index p = y.dim(2);
    if (rank < 1)
        throw EstimationError(FailureKind::identifiability, "scpd_decompose: rank must be positive");
    if (p < 2)
        throw EstimationError(FailureKind::identifiability,
                              "scpd_decompose: at least two subcarriers are required");
    if ((p - 1) * t < rank)
        throw EstimationError(FailureKind::identifiability,
                              fmt::format("scpd_decompose: (P-1)T = {} < U = {}: rank(C_trimmed kr B)<U possible",
                                          (p - 1) * t, rank));
    if (q < rank)
        throw EstimationError(
            FailureKind::identifiability,
            fmt::format("scpd_decompose: Q = {} < U = {}: rank(A)<U possible", q, rank));

    const ComplexMatrix y1 = mode1_unfold(y);
    const auto svd = numerics::truncated_svd(y1.transpose(), rank);

    const Index shifted = (p - 1) * t;
    const ComplexMatrix u1 = svd.u.topRows(shifted);
    const ComplexMatrix u2 = svd.u.bottomRows(shifted);

    Decomposition dec;
    dec.spectrum = svd.spectrum;
    dec.u1_condition = numerics::condition_number(u1);
    if (!(dec.u1_condition <= options.max_u1_condition))
        throw EstimationError(FailureKind::ill_conditioned,
                              fmt::format("scpd_decompose: U1 condition number {:.3g} exceeds {:.3g}",
                                          dec.u1_condition, options.max_u1_condition));

    const auto eig = numerics::eig_general(numerics::pseudo_inverse(u1) * u2);

    // Order components by generator phase so the output does not depend on
    // the eigensolver's ordering.
    std::vector<Index> order(static_cast<std::size_t>(rank));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return wrap_two_pi(-std::arg(eig.values(a))) < wrap_two_pi(-std::arg(eig.values(b)));
    });

    dec.raw_generators.resize(rank);
    ComplexMatrix mixing(rank, rank);
    for (Index u = 0; u < rank; ++u)
    {
        dec.raw_generators(u) = eig.values(order[static_cast<std::size_t>(u)]);
        mixing.col(u) = eig.vectors.col(order[static_cast<std::size_t>(u)]);
    }

    dec.generators = dec.raw_generators;
    if (options.project_generators)
        for (Index u = 0; u < rank; ++u)
        {
            const double mag = std::abs(dec.generators(u));
            if (!(mag > 0.0) || !std::isfinite(mag))
                throw EstimationError(FailureKind::eigendecomposition,
                                      "scpd_decompose: zero or non-finite generator");
            dec.generators(u) /= mag;
        }

    auto &f = dec.factors;
    f.c = options.project_generators ? unit_vandermonde_columns(dec.generators, p)
                                     : vandermonde_columns(dec.generators, p);

    // (U M)(:, u) = c_u kron b_u; reshaped to T x P it is b_u c_u^T.
    const ComplexMatrix um = svd.u * mixing;
    f.b.resize(t, rank);
    for (Index u = 0; u < rank; ++u)
    {
        const Eigen::Map<const ComplexMatrix> block(um.col(u).data(), t, p);
        f.b.col(u) = block * f.c.col(u).conjugate() / f.c.col(u).squaredNorm();
    }

    f.a = y1 * numerics::pseudo_inverse(khatri_rao(f.c, f.b).transpose());

    if (!f.a.allFinite() || !f.b.allFinite())
        throw EstimationError(FailureKind::ill_conditioned,
                              "scpd_decompose: non-finite factor estimates");
    return dec;
}

double delay_from_generator(cd z, const SystemConfig &cfg)
{
    const double period = cfg.unambiguous_delay();
    double d = -static_cast<double>(cfg.p0) / (kTwoPi * cfg.fs) * std::arg(z);
    d = std::fmod(d, period);
    if (d < 0.0)
        d += period;
    if (d >= period)
        d = 0.0;
    return d;
}

ChannelEstimate extract_parameters(const Decomposition &dec, const TrainingMatrices &tm,
                                   const SystemConfig &cfg, const ExtractOptions &options)
{
    const auto &f = dec.factors;
    const Index rank = f.rank();
    if (f.a.rows() != tm.v.cols() || f.b.rows() != tm.f.cols() || f.c.rows() != cfg.p ||
        f.b.cols() != rank || f.c.cols() != rank || dec.generators.size() != rank)
        throw std::invalid_argument("extract_parameters: factor shapes do not match the training setup");

    const IrsAngleSearch irs(tm.v, cfg.mx, cfg.my, options.angle);
    const BsAngleSearch bs(tm.f, options.angle);

    ChannelEstimate est;
    auto &diag = est.diagnostics;
    diag.rank = static_cast<int>(rank);
    diag.u1_condition = dec.u1_condition;
    est.paths.resize(static_cast<std::size_t>(rank));

    ComplexMatrix a_tilde(f.a.rows(), rank);
    ComplexMatrix b_tilde(f.b.rows(), rank);
    for (Index u = 0; u < rank; ++u)
    {
        auto &path = est.paths[static_cast<std::size_t>(u)];
        path.iota = delay_from_generator(dec.generators(u), cfg);
        const auto ia = irs.search(f.a.col(u));
        const auto ib = bs.search(f.b.col(u));
        path.omega_a = ia.omega_a;
        path.omega_e = ia.omega_e;
        path.phi = ib.phi;
        diag.irs_scores.push_back(ia.score);
        diag.bs_scores.push_back(ib.score);
        a_tilde.col(u) = irs.projected_steering(path.omega_a, path.omega_e);
        b_tilde.col(u) = bs.projected_steering(path.phi);
    }

    // A^ = A~ Psi1 and B^ = B~ G Psi2 with Psi1 Psi2 = I, so G = pinv(B~) B^ Psi1.
    diag.a_tilde_condition = numerics::condition_number(a_tilde);
    diag.b_tilde_condition = numerics::condition_number(b_tilde);
    diag.a_tilde_degenerate = rank > 1 && (!(diag.a_tilde_condition <= options.max_steering_condition) ||
                                           max_abs_cosine(a_tilde) >= options.parallel_threshold);
    diag.b_tilde_degenerate = rank > 1 && (!(diag.b_tilde_condition <= options.max_steering_condition) ||
                                           max_abs_cosine(b_tilde) >= options.parallel_threshold);

    ComplexVector psi1;
    if (diag.a_tilde_degenerate)
    {
        psi1 = columnwise_scale(a_tilde, f.a);
    }
    else
    {
        const ComplexMatrix full = numerics::pseudo_inverse(a_tilde) * f.a;
        psi1 = full.diagonal();
        const double on = psi1.norm();
        const double off = std::sqrt(std::max(0.0, full.squaredNorm() - psi1.squaredNorm()));
        diag.psi1_offdiag_ratio = on > 0.0 ? off / on : std::numeric_limits<double>::infinity();
    }

    ComplexVector gains;
    if (diag.b_tilde_degenerate)
        gains = columnwise_scale(b_tilde, f.b).cwiseProduct(psi1);
    else
        gains = (numerics::pseudo_inverse(b_tilde) * f.b * psi1.asDiagonal()).diagonal();

    for (Index u = 0; u < rank; ++u)
        est.paths[static_cast<std::size_t>(u)].beta = gains(u);

    est.h = cascade_channels(est.paths, cfg);
    return est;
}

ChannelEstimate extract_parameters(const FactorMatrices &factors, const TrainingMatrices &tm,
                                   const SystemConfig &cfg, const ExtractOptions &options)
{
    Decomposition dec;
    dec.factors = factors;
    dec.raw_generators = factors.c.row(0).transpose();
    dec.generators = dec.raw_generators;
    for (Index u = 0; u < dec.generators.size(); ++u)
    {
        const double mag = std::abs(dec.generators(u));
        if (mag > 0.0)
            dec.generators(u) /= mag;
    }
    return extract_parameters(dec, tm, cfg, options);
}

ChannelEstimate estimate_channel(const ComplexTensor3 &y, const TrainingMatrices &tm,
                                 const SystemConfig &cfg, int oracle_rank,
                                 const EstimatorOptions &options)
{
    int rank = oracle_rank;
    if (options.rank_mode == RankMode::mdl)
    {
        const RealVector s = numerics::singular_values(mode1_unfold(y).transpose());
        const int cap = static_cast<int>(std::min<Index>(y.dim(0), (y.dim(2) - 1) * y.dim(1)));
        // Y_(1)^T holds TP snapshots of a Q-dimensional vector; the spectrum
        // has min(Q, TP) entries and the sample count is the other dimension.
        const Index snapshots = std::max(y.dim(0), y.dim(1) * y.dim(2));
        rank = estimate_rank_mdl(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())),
                                 static_cast<int>(snapshots), std::max(cap, 1));
    }
    const auto dec = scpd_decompose(y, rank, options.decompose);
    auto est = extract_parameters(dec, tm, cfg, options.extract);
    const double yn = frobenius_norm(y);
    est.diagnostics.cpd_residual =
        yn > 0.0 ? frobenius_norm(y - cpd_synthesize(dec.factors)) / yn : 0.0;
    return est;
}

} // namespace irscpd::scpd
