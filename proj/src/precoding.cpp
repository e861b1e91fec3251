// SPDX-License-Identifier: Apache-2.0
//
// xlbt: near-field multiuser beam training toolkit for sub-connected XL-MIMO
// Copyright (C) 2026 The xlbt authors
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

#include "xlbt/precoding.hpp"

#include <cmath>
#include <string>

namespace xlbt {

namespace {

void check_dims(const CMatrix& f_rf, const CMatrix& H)
{
    if (f_rf.rows() != H.rows())
        throw std::invalid_argument("analog beamformer has " + std::to_string(f_rf.rows()) +
                                    " rows but the channel has " + std::to_string(H.rows()));
}

// tr(M^{-1}) for Hermitian positive-definite M.
double trace_of_inverse(const CMatrix& M)
{
    Eigen::LLT<CMatrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("loss matrix is not positive definite");
    const CMatrix inv = llt.solve(CMatrix::Identity(M.rows(), M.cols()));
    return inv.diagonal().real().sum();
}

double loss_from_projected(const CMatrix& G, const CMatrix& projected, const LinkBudget& budget)
{
    // projected = (F^H F)^{-1} G, so G^H projected = H^H F (F^H F)^{-1} F^H H
    const Eigen::Index K = G.cols();
    const double c = budget.p_t / (static_cast<double>(K) * budget.sigma2);
    CMatrix M = CMatrix::Identity(K, K) + c * (G.adjoint() * projected);
    M = 0.5 * (M + M.adjoint()).eval();
    return trace_of_inverse(M);
}

// F_tilde = A^{-1} G with A = G G^H + ridge * gram.
CMatrix unscaled_precoder(const CMatrix& G, const CMatrix& gram, double ridge)
{
    CMatrix A = G * G.adjoint() + ridge * gram;
    A = 0.5 * (A + A.adjoint()).eval();
    Eigen::LLT<CMatrix> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("MMSE system matrix is not positive definite (rank-deficient analog stage)");
    return llt.solve(G);
}

} // namespace

void BeamSelection::validate(const Codebook& codebook) const
{
    for (int i : indices)
        if (i < 1 || i > codebook.size())
            throw std::out_of_range("beam index " + std::to_string(i) + " outside [1, " +
                                    std::to_string(codebook.size()) + "]");
}

LinkBudget LinkBudget::from_snr_db(double snr_db, double p_t)
{
    LinkBudget b;
    b.p_t = p_t;
    b.sigma2 = p_t / std::pow(10.0, snr_db / 10.0);
    b.validate();
    return b;
}

void LinkBudget::validate() const
{
    if (!(p_t > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("link budget needs p_t > 0 and sigma2 > 0");
}

CMatrix assemble_analog(const BeamSelection& selection, const Codebook& codebook)
{
    selection.validate(codebook);
    const int n_a = codebook.beam_length();
    const int n_sub = selection.size();
    CMatrix f = CMatrix::Zero(static_cast<Eigen::Index>(n_sub) * n_a, n_sub);
    for (int s = 0; s < n_sub; ++s)
        f.block(static_cast<Eigen::Index>(s) * n_a, s, n_a, 1) = codebook.beam(selection.indices[s]);
    return f;
}

DigitalPrecoder mmse_digital(const CMatrix& f_rf, const CMatrix& H, const LinkBudget& budget)
{
    check_dims(f_rf, H);
    budget.validate();
    const CMatrix G = f_rf.adjoint() * H;
    const double h_norm = H.norm();
    if (h_norm == 0.0 || G.norm() < 1e-12 * h_norm)
        throw DegenerateChannelError("effective channel F_RF^H H is zero; power scaling undefined");

    const double K = static_cast<double>(H.cols());
    const CMatrix f_tilde = unscaled_precoder(G, f_rf.adjoint() * f_rf, K * budget.sigma2 / budget.p_t);
    const double power = (f_rf * f_tilde).squaredNorm();
    DigitalPrecoder out;
    out.beta = std::sqrt(budget.p_t / power);
    out.f_bb = out.beta * f_tilde;
    return out;
}

HybridPrecoder mmse_hybrid(const BeamSelection& selection, const Codebook& codebook, const CMatrix& H,
                           const LinkBudget& budget)
{
    HybridPrecoder out;
    out.f_rf = assemble_analog(selection, codebook);
    auto digital = mmse_digital(out.f_rf, H, budget);
    out.f_bb = std::move(digital.f_bb);
    out.beta = digital.beta;
    return out;
}

double variant_mse_loss(const CMatrix& f_rf, const CMatrix& H, const LinkBudget& budget)
{
    check_dims(f_rf, H);
    budget.validate();
    const CMatrix G = f_rf.adjoint() * H;
    Eigen::LLT<CMatrix> gram(f_rf.adjoint() * f_rf);
    if (gram.info() != Eigen::Success)
        throw std::domain_error("analog beamformer does not have full column rank");
    return loss_from_projected(G, gram.solve(G), budget);
}

double variant_mse_loss_orthonormal(const CMatrix& f_rf, const CMatrix& H, const LinkBudget& budget)
{
    check_dims(f_rf, H);
    budget.validate();
    const CMatrix G = f_rf.adjoint() * H;
    return loss_from_projected(G, G, budget);
}

double reconstruction_mse(const CMatrix& H, const CMatrix& f_rf, const CMatrix& f_bb, double beta,
                          const LinkBudget& budget)
{
    if (!(beta > 0.0))
        throw std::domain_error("reconstruction_mse needs beta > 0");
    check_dims(f_rf, H);
    const Eigen::Index K = H.cols();
    const CMatrix E = CMatrix::Identity(K, K) - (H.adjoint() * f_rf * f_bb) / beta;
    return E.squaredNorm() + static_cast<double>(K) * budget.sigma2 / (beta * beta);
}

double sum_rate(const CMatrix& H, const CMatrix& f_rf, const CMatrix& f_bb, double sigma2)
{
    check_dims(f_rf, H);
    return effective::sum_rate(f_rf.adjoint() * H, f_bb, sigma2);
}

namespace effective {

CMatrix channel(const BeamSelection& selection, const Codebook& codebook, const CMatrix& H)
{
    selection.validate(codebook);
    const int n_a = codebook.beam_length();
    const int n_sub = selection.size();
    if (H.rows() != static_cast<Eigen::Index>(n_sub) * n_a)
        throw std::invalid_argument("channel rows do not match n_sub * n_a");
    CMatrix G(n_sub, H.cols());
    for (int s = 0; s < n_sub; ++s)
        G.row(s) = codebook.beam(selection.indices[s]).adjoint() *
                   H.middleRows(static_cast<Eigen::Index>(s) * n_a, n_a);
    return G;
}

double loss(const CMatrix& G, const LinkBudget& budget)
{
    budget.validate();
    return loss_from_projected(G, G, budget);
}

DigitalPrecoder mmse(const CMatrix& G, const LinkBudget& budget)
{
    budget.validate();
    if (G.norm() == 0.0)
        throw DegenerateChannelError("effective channel is zero; power scaling undefined");
    const double K = static_cast<double>(G.cols());
    const CMatrix f_tilde =
        unscaled_precoder(G, CMatrix::Identity(G.rows(), G.rows()), K * budget.sigma2 / budget.p_t);
    DigitalPrecoder out;
    out.beta = std::sqrt(budget.p_t / f_tilde.squaredNorm());
    out.f_bb = out.beta * f_tilde;
    return out;
}

double sum_rate(const CMatrix& G, const CMatrix& f_bb, double sigma2)
{
    // T(k, i) = h_k^H F_RF f_{BB,i}
    const CMatrix T = G.adjoint() * f_bb;
    double rate = 0.0;
    for (Eigen::Index k = 0; k < T.rows(); ++k) {
        const double signal = std::norm(T(k, k));
        const double interference = T.row(k).squaredNorm() - signal;
        rate += std::log2(1.0 + signal / (std::max(interference, 0.0) + sigma2));
    }
    return rate;
}

} // namespace effective

} // namespace xlbt
