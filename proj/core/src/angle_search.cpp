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

#include "irscpd/angle_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "irscpd/channel_model.hpp"

namespace irscpd
{

double golden_section_max(const std::function<double(double)> &f, double lo, double hi,
                          double tolerance)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tolerance)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

namespace
{

double normalized_correlation(const ComplexVector &x, double x_norm, const ComplexVector &w)
{
    const double wn = w.norm();
    if (x_norm == 0.0 || wn == 0.0)
        return 0.0;
    return std::abs(x.dot(w)) / (x_norm * wn);
}

// Grid scores and the indices of the strongest local maxima (wrap-around
// neighbourhood), best first: at least `count` of them, plus those within
// `ratio` of the best, never more than `limit`.
std::vector<Index> strongest_peaks(const RealVector &scores, int rows, int cols, int count,
                                   double ratio, int limit)
{
    std::vector<Index> peaks;
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
        {
            const double s = scores(r + rows * c);
            bool is_peak = true;
            for (int dc = -1; dc <= 1 && is_peak; ++dc)
                for (int dr = -1; dr <= 1; ++dr)
                {
                    if (dr == 0 && dc == 0)
                        continue;
                    if (rows == 1 && dr != 0)
                        continue;
                    if (cols == 1 && dc != 0)
                        continue;
                    const int rr = (r + dr + rows) % rows;
                    const int cc = (c + dc + cols) % cols;
                    if (scores(rr + rows * cc) > s)
                    {
                        is_peak = false;
                        break;
                    }
                }
            if (is_peak)
                peaks.push_back(r + rows * c);
        }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](Index a, Index b) { return scores(a) > scores(b); });
    if (peaks.empty())
    {
        Index best = 0;
        scores.maxCoeff(&best);
        peaks.push_back(best);
    }
    std::size_t keep = std::min(peaks.size(), static_cast<std::size_t>(count));
    while (keep < peaks.size() && static_cast<int>(keep) < limit &&
           scores(peaks[keep]) >= ratio * scores(peaks.front()))
        ++keep;
    peaks.resize(keep);
    return peaks;
}

void check_options(const AngleSearchOptions &o)
{
    if (o.oversample < 1 || o.candidates < 1 || o.max_sweeps < 1 || !(o.tolerance > 0.0) ||
        o.newton_steps < 0 || o.max_candidates < o.candidates || !(o.candidate_ratio >= 0.0) ||
        o.candidate_ratio > 1.0)
        throw std::invalid_argument(
            "AngleSearchOptions: settings must be positive, max_candidates >= candidates and "
            "candidate_ratio in [0, 1]");
}

// Value, gradient and Hessian of f = |x^H g|^2 / (g^H g) with respect to the
// angles, given g(theta) and its first and second derivatives.
ScoreDerivatives squared_score_derivatives(const ComplexVector &x, const ComplexVector &g,
                                           const std::vector<ComplexVector> &d1,
                                           const std::vector<std::vector<ComplexVector>> &d2)
{
    const auto dim = static_cast<Index>(d1.size());
    const cd c = x.dot(g);
    const double n = g.squaredNorm();
    const double u = std::norm(c);
    std::vector<cd> ci(d1.size());
    RealVector ni(dim);
    RealVector ui(dim);
    for (Index i = 0; i < dim; ++i)
    {
        const auto si = static_cast<std::size_t>(i);
        ci[si] = x.dot(d1[si]);
        ni(i) = 2.0 * std::real(g.dot(d1[si]));
        ui(i) = 2.0 * std::real(std::conj(c) * ci[si]);
    }
    ScoreDerivatives out;
    out.f = u / n;
    out.grad = ui / n - (u / (n * n)) * ni;
    out.hess.resize(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
        {
            const auto si = static_cast<std::size_t>(i);
            const auto sj = static_cast<std::size_t>(j);
            const cd cij = x.dot(d2[si][sj]);
            const double nij = 2.0 * std::real(d1[sj].dot(d1[si]) + g.dot(d2[si][sj]));
            const double uij = 2.0 * std::real(std::conj(ci[sj]) * ci[si] + std::conj(c) * cij);
            out.hess(i, j) = uij / n - (ui(i) * ni(j) + ui(j) * ni(i) + u * nij) / (n * n) +
                             2.0 * u * ni(i) * ni(j) / (n * n * n);
        }
    return out;
}

// Newton iteration towards the nearby maximum of the squared score. A step is
// taken only where the Hessian is negative definite, the step stays inside
// `max_step` and the gradient shrinks without the score dropping beyond
// rounding; otherwise the current point is kept.
template <typename Eval>
RealVector newton_polish(const Eval &eval, RealVector theta, int steps, double max_step)
{
    ScoreDerivatives cur = eval(theta);
    for (int it = 0; it < steps; ++it)
    {
        const Eigen::LDLT<RealMatrix> ldlt(-cur.hess);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            (ldlt.vectorD().array() <= 0.0).any())
            break;
        const RealVector step = ldlt.solve(cur.grad);
        if (!step.allFinite() || step.norm() > max_step)
            break;
        const RealVector next = theta + step;
        const ScoreDerivatives cand = eval(next);
        if (!(cand.grad.norm() < cur.grad.norm()) || cand.f < cur.f * (1.0 - 1e-12))
            break;
        theta = next;
        cur = cand;
        if (step.norm() <= 1e-15 * (1.0 + theta.norm()))
            break;
    }
    return theta;
}

} // namespace

ComplexMatrix projected_irs_grid(const ComplexMatrix &v, int mx, int my, int ga, int ge)
{
    if (mx < 1 || my < 1 || ga < 1 || ge < 1 || v.rows() != static_cast<Index>(mx) * my)
        throw std::invalid_argument("projected_irs_grid: inconsistent sizes");
    // V^T a(w_a, w_e) = e_a^T V_q e_e with V_q the q-th column reshaped to
    // Mx x My, so the whole grid for slot q is Ea V_q Ee^T.
    ComplexMatrix ea(ga, mx);
    for (int g = 0; g < ga; ++g)
        ea.row(g) = steer_bs(kTwoPi * g / ga, mx).transpose();
    ComplexMatrix ee(ge, my);
    for (int g = 0; g < ge; ++g)
        ee.row(g) = steer_bs(kTwoPi * g / ge, my).transpose();

    ComplexMatrix grid(v.cols(), static_cast<Index>(ga) * ge);
    for (Index q = 0; q < v.cols(); ++q)
    {
        const Eigen::Map<const ComplexMatrix> vq(v.col(q).data(), mx, my);
        const ComplexMatrix resp = ea * vq * ee.transpose();
        grid.row(q) = Eigen::Map<const ComplexVector>(resp.data(), resp.size()).transpose();
    }
    return grid;
}

ComplexMatrix projected_bs_grid(const ComplexMatrix &f, int size)
{
    if (size < 1)
        throw std::invalid_argument("projected_bs_grid: grid size must be positive");
    ComplexMatrix steering(f.rows(), size);
    for (int g = 0; g < size; ++g)
        steering.col(g) = steer_bs(kTwoPi * g / size, static_cast<int>(f.rows()));
    return f.transpose() * steering;
}

IrsAngleSearch::IrsAngleSearch(ComplexMatrix v, int mx, int my, AngleSearchOptions options)
    : v_(std::move(v)), vt_(v_.transpose()), mx_(mx), my_(my), options_(options),
      ga_(options.oversample * mx), ge_(options.oversample * my)
{
    check_options(options_);
    if (v_.rows() != static_cast<Index>(mx) * my)
        throw std::invalid_argument(
            fmt::format("IrsAngleSearch: V has {} rows, expected {}x{}", v_.rows(), mx, my));

    grid_ = projected_irs_grid(v_, mx_, my_, ga_, ge_);
    grid_norms_ = grid_.colwise().norm().transpose();
}

// a_IRS(wa, we) = kron(ee, ea) with ea = a_BS(wa, Mx), ee = a_BS(we, My), so
// V^T a_IRS = sum_iy ee(iy) V^T(:, iy-th block of Mx columns) ea. This takes
// Mx + My exponentials instead of Mx My.
ComplexVector IrsAngleSearch::project(const ComplexVector &ea, const ComplexVector &ee) const
{
    ComplexVector g = ComplexVector::Zero(vt_.rows());
    for (int iy = 0; iy < my_; ++iy)
        g.noalias() += ee(iy) * (vt_.middleCols(static_cast<Index>(mx_) * iy, mx_) * ea);
    return g;
}

ComplexVector IrsAngleSearch::projected_steering(double omega_a, double omega_e) const
{
    return project(steer_bs(omega_a, mx_), steer_bs(omega_e, my_));
}

double IrsAngleSearch::score(const ComplexVector &x, double omega_a, double omega_e) const
{
    return normalized_correlation(x, x.norm(), projected_steering(omega_a, omega_e));
}

IrsAngle IrsAngleSearch::search(const ComplexVector &x) const
{
    if (x.size() != v_.cols())
        throw std::invalid_argument("IrsAngleSearch: factor column has wrong length");
    const double xn = x.norm();
    RealVector scores = (grid_.adjoint() * x).cwiseAbs();
    for (Index g = 0; g < scores.size(); ++g)
        scores(g) = (grid_norms_(g) > 0.0 && xn > 0.0) ? scores(g) / (grid_norms_(g) * xn) : 0.0;

    const double step_a = kTwoPi / ga_;
    const double step_e = kTwoPi / ge_;
    IrsAngle best{0.0, 0.0, -1.0};
    for (Index idx : strongest_peaks(scores, ga_, ge_, options_.candidates,
                                         options_.candidate_ratio, options_.max_candidates))
    {
        double wa = step_a * static_cast<double>(idx % ga_);
        double we = step_e * static_cast<double>(idx / ga_);
        double s = scores(idx);
        for (int sweep = 0; sweep < options_.max_sweeps; ++sweep)
        {
            const double na = golden_section_max(
                [&](double a) { return score(x, a, we); }, wa - step_a, wa + step_a,
                options_.tolerance);
            const double sa = score(x, na, we);
            const double moved_a = sa > s ? std::abs(na - wa) : 0.0;
            if (sa > s)
            {
                wa = na;
                s = sa;
            }
            const double ne = golden_section_max(
                [&](double e) { return score(x, wa, e); }, we - step_e, we + step_e,
                options_.tolerance);
            const double se = score(x, wa, ne);
            const double moved_e = se > s ? std::abs(ne - we) : 0.0;
            if (se > s)
            {
                we = ne;
                s = se;
            }
            if (moved_a < options_.tolerance && moved_e < options_.tolerance)
                break;
        }
        if (options_.newton_steps > 0)
        {
            RealVector theta(2);
            theta << wa, we;
            theta = newton_polish([&](const RealVector &t) { return derivatives(x, t(0), t(1)); },
                                  theta, options_.newton_steps, 0.5 * std::min(step_a, step_e));
            const double sn = score(x, theta(0), theta(1));
            if (sn >= s * (1.0 - 1e-12))
            {
                wa = theta(0);
                we = theta(1);
                s = std::max(s, sn);
            }
        }
        if (s > best.score)
            best = {wrap_two_pi(wa), wrap_two_pi(we), s};
    }
    return best;
}

ScoreDerivatives IrsAngleSearch::derivatives(const ComplexVector &x, double omega_a,
                                             double omega_e) const
{
    const ComplexVector ea = steer_bs(omega_a, mx_);
    const ComplexVector ee = steer_bs(omega_e, my_);
    // d/dw of exp(j k w) is j k exp(j k w).
    const cd j(0.0, 1.0);
    const ComplexVector ka = j * RealVector::LinSpaced(mx_, 0.0, mx_ - 1.0).cast<cd>();
    const ComplexVector ke = j * RealVector::LinSpaced(my_, 0.0, my_ - 1.0).cast<cd>();
    const ComplexVector da = ka.cwiseProduct(ea);
    const ComplexVector de = ke.cwiseProduct(ee);
    const ComplexVector g_ae = project(da, de);
    return squared_score_derivatives(x, project(ea, ee), {project(da, ee), project(ea, de)},
                                     {{project(ka.cwiseProduct(da), ee), g_ae},
                                      {g_ae, project(ea, ke.cwiseProduct(de))}});
}

BsAngleSearch::BsAngleSearch(ComplexMatrix f, AngleSearchOptions options)
    : f_(std::move(f)), options_(options),
      grid_size_(options.oversample * static_cast<int>(f_.rows()))
{
    check_options(options_);
    grid_ = projected_bs_grid(f_, grid_size_);
    grid_norms_ = grid_.colwise().norm().transpose();
}

ComplexVector BsAngleSearch::projected_steering(double phi) const
{
    return f_.transpose() * steer_bs(phi, static_cast<int>(f_.rows()));
}

double BsAngleSearch::score(const ComplexVector &x, double phi) const
{
    return normalized_correlation(x, x.norm(), projected_steering(phi));
}

BsAngle BsAngleSearch::search(const ComplexVector &x) const
{
    if (x.size() != f_.cols())
        throw std::invalid_argument("BsAngleSearch: factor column has wrong length");
    const double xn = x.norm();
    RealVector scores = (grid_.adjoint() * x).cwiseAbs();
    for (Index g = 0; g < scores.size(); ++g)
        scores(g) = (grid_norms_(g) > 0.0 && xn > 0.0) ? scores(g) / (grid_norms_(g) * xn) : 0.0;

    const double step = kTwoPi / grid_size_;
    BsAngle best{0.0, -1.0};
    for (Index idx : strongest_peaks(scores, grid_size_, 1, options_.candidates,
                                         options_.candidate_ratio, options_.max_candidates))
    {
        double phi = step * static_cast<double>(idx);
        double s = scores(idx);
        const double refined = golden_section_max([&](double a) { return score(x, a); },
                                                  phi - step, phi + step, options_.tolerance);
        const double sr = score(x, refined);
        if (sr > s)
        {
            phi = refined;
            s = sr;
        }
        if (options_.newton_steps > 0)
        {
            RealVector theta(1);
            theta << phi;
            theta = newton_polish([&](const RealVector &t) { return derivatives(x, t(0)); }, theta,
                                  options_.newton_steps, 0.5 * step);
            const double sn = score(x, theta(0));
            if (sn >= s * (1.0 - 1e-12))
            {
                phi = theta(0);
                s = std::max(s, sn);
            }
        }
        if (s > best.score)
            best = {wrap_two_pi(phi), s};
    }
    return best;
}

ScoreDerivatives BsAngleSearch::derivatives(const ComplexVector &x, double phi) const
{
    const ComplexVector b = steer_bs(phi, static_cast<int>(f_.rows()));
    const ComplexVector idx =
        RealVector::LinSpaced(b.size(), 0.0, static_cast<double>(b.size() - 1)).cast<cd>();
    const cd j(0.0, 1.0);
    const ComplexVector db = j * idx.cwiseProduct(b);
    const ComplexVector dbb = j * idx.cwiseProduct(db);
    const ComplexMatrix ft = f_.transpose();
    return squared_score_derivatives(x, ft * b, {ft * db}, {{ft * dbb}});
}

} // namespace irscpd
