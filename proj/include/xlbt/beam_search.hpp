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

#include <cstdint>
#include <optional>
#include <vector>

#include "xlbt/codebook.hpp"
#include "xlbt/precoding.hpp"

namespace xlbt {

struct SearchResult {
    BeamSelection selection;
    std::optional<DigitalPrecoder> digital; // set when the method designs F_BB itself
    long long pilot_count = 0;
    int iterations = 0;
    double loss = 0.0;              // variant-MSE of `selection` on the channel the search saw
    std::vector<double> loss_trace; // AO only: loss at start and after every sweep
};

enum class SearchObjective { min_loss, max_sum_rate };

/// Responses of every codebook beam on every subarray: row i-1 of table(s) is
/// a_i^H H_s, i.e. the effective-channel row that subarray s contributes when it
/// uses beam i. All searches below work on this table.
class BeamResponseTable {
  public:
    BeamResponseTable(const CMatrix& H, const Codebook& codebook);

    int n_sub() const { return static_cast<int>(responses_.size()); }
    int n_q() const { return n_q_; }
    int users() const { return users_; }
    const CMatrix& table(int subarray) const { return responses_[subarray]; }

    /// Effective channel G = F_RF^H H for a full or partial selection (the first
    /// selection.size() subarrays; the others contribute nothing).
    CMatrix effective(const BeamSelection& selection) const;

  private:
    int n_q_;
    int users_;
    std::vector<CMatrix> responses_;
};

struct ExhaustiveOptions {
    long long enumeration_cap = 1'000'000;
    int workers = 1;
};

/// Enumerates all n_q^n_sub selections. Ties go to the lexicographically
/// smallest index tuple. Throws std::length_error when the enumeration exceeds
/// the cap. pilot_count is n_q^n_sub (one measurement per beam combination).
SearchResult exhaustive_oracle(const CMatrix& H, const Codebook& codebook, int n_sub, const LinkBudget& budget,
                               SearchObjective objective, const ExhaustiveOptions& options = {});

/// Single ascending pass; subarray s picks the loss-minimising beam given the
/// beams already fixed on subarrays 1..s-1. pilot_count = n_q * n_sub.
SearchResult greedy_per_subarray(const CMatrix& H, const Codebook& codebook, const LinkBudget& budget);

/// Per-subarray 4-ary descent over nested index intervals of the codebook.
/// Each level splits the current interval into (up to) four contiguous groups
/// and probes each group with the normalised superposition of its beams, keeping
/// the group with the largest sum over users of |f^H h_{k,s}|.
/// Requires n_q to be a power of two (ConfigError otherwise).
/// pilot_count = 4 * ceil(log4 n_q) * n_sub.
SearchResult radix4_hierarchical(const CMatrix& H, const Codebook& codebook, const LinkBudget& budget);

/// ceil(log4 n) for n >= 1.
int radix4_depth(int n_q);

struct AoOptions {
    int max_iter = 50;
    double tol = 1e-9;
    std::optional<BeamSelection> initial; // default: greedy_per_subarray selection
};

/// Alternating optimisation on a (possibly noisy) channel estimate: coordinate
/// sweeps over subarray beams minimising variant-MSE, then the closed-form MMSE
/// digital precoder. Stops when a sweep improves the loss by less than tol.
/// pilot_count = n_q * n_sub (full beam sweep for CSI acquisition).
SearchResult alternating_optimization(const CMatrix& H_est, const Codebook& codebook, const LinkBudget& budget,
                                      const AoOptions& options = {});

/// H + E, E_ij ~ CN(0, ||H||_F^2 / (N K est_snr)). est_snr is linear; +inf returns H.
CMatrix noisy_csi(const CMatrix& H, double est_snr, std::uint64_t seed);

/// Uniform i.i.d. indices; pilot_count = 0.
SearchResult random_selection(int n_sub, int n_q, std::uint64_t seed);

} // namespace xlbt
