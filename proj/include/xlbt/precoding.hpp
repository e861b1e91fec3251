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

#pragma once

#include <vector>

#include "xlbt/codebook.hpp"
#include "xlbt/common.hpp"

namespace xlbt {

// One codebook index (1-based) per subarray.
struct BeamSelection {
    std::vector<int> indices;

    int size() const { return static_cast<int>(indices.size()); }
    void validate(const Codebook& codebook) const;
    bool operator==(const BeamSelection&) const = default;
};

// Total transmit power and receiver noise variance. SNR is p_t / sigma2.
struct LinkBudget {
    double p_t = 1.0;
    double sigma2 = 1.0;

    static LinkBudget from_snr_db(double snr_db, double p_t = 1.0);
    double snr() const { return p_t / sigma2; }
    void validate() const;
};

struct DigitalPrecoder {
    CMatrix f_bb; // N_sub x K, already scaled by beta
    double beta = 0.0;
};

struct HybridPrecoder {
    CMatrix f_rf; // N x N_sub, block diagonal
    CMatrix f_bb; // N_sub x K
    double beta = 0.0;
};

// Block-diagonal analog beamformer diag{a(i_1), ..., a(i_{N_sub})}.
CMatrix assemble_analog(const BeamSelection& selection, const Codebook& codebook);

// Closed-form MMSE digital precoder for a fixed analog stage:
//   F_BB = beta (F^H H H^H F + (K sigma2 / P_t) F^H F)^{-1} F^H H,
// with beta chosen so that ||F_RF F_BB||_F^2 = P_t.
// Throws DegenerateChannelError when ||F_RF^H H||_F < 1e-12 ||H||_F.
DigitalPrecoder mmse_digital(const CMatrix& f_rf, const CMatrix& H, const LinkBudget& budget);

HybridPrecoder mmse_hybrid(const BeamSelection& selection, const Codebook& codebook, const CMatrix& H,
                           const LinkBudget& budget);

// Variant-MSE beam selection objective
//   tr((I_K + P_t/(K sigma2) H^H F (F^H F)^{-1} F^H H)^{-1}),  in (0, K].
double variant_mse_loss(const CMatrix& f_rf, const CMatrix& H, const LinkBudget& budget);

// Same objective with F^H F replaced by the identity; exact for assemble_analog outputs.
double variant_mse_loss_orthonormal(const CMatrix& f_rf, const CMatrix& H, const LinkBudget& budget);

// E||s - beta^{-1} (H^H F_RF F_BB s + n)||^2 in closed form:
//   ||I_K - beta^{-1} H^H F_RF F_BB||_F^2 + K sigma2 / beta^2.
double reconstruction_mse(const CMatrix& H, const CMatrix& f_rf, const CMatrix& f_bb, double beta,
                          const LinkBudget& budget);

// Downlink sum rate in bits/s/Hz with inter-user interference treated as noise.
double sum_rate(const CMatrix& H, const CMatrix& f_rf, const CMatrix& f_bb, double sigma2);

// Reduced forms for analog stages with orthonormal columns (every hard selection).
// G = F_RF^H H is the N_sub x K effective channel; these avoid forming F_RF.
namespace effective {

CMatrix channel(const BeamSelection& selection, const Codebook& codebook, const CMatrix& H);
double loss(const CMatrix& G, const LinkBudget& budget);
DigitalPrecoder mmse(const CMatrix& G, const LinkBudget& budget);
double sum_rate(const CMatrix& G, const CMatrix& f_bb, double sigma2);

} // namespace effective

} // namespace xlbt
