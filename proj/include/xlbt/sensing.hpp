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
#include <string>
#include <vector>

#include "xlbt/common.hpp"

namespace xlbt {

/// Uplink sensing setup: M pilot slots, each with an N x K combiner Phi^(m).
/// The stacked measurement is Y = Phi^H H + noise, of size (M K) x K, with
/// slot m occupying rows [m K, (m + 1) K).
struct SensingConfig {
    int m_slots = 0;
    int k = 0;
    int n = 0;
    std::vector<CMatrix> slots; // m_slots matrices of size n x k
    double noise_var = 0.0;

    /// The (M K) x N matrix Phi^H whose block m is Phi^(m)^H.
    CMatrix stacked() const;
    void validate() const;
};

/// Random constant-modulus combiner: i.i.d. uniform phases, entries of modulus 1/sqrt(n).
SensingConfig random_combiner(int m, int k, int n, std::uint64_t seed);

/// Y = Phi^H H + Ntilde where slot m's noise is Phi^(m)^H N^(m) with N^(m) ~ CN(0, sigma2)
/// drawn per (seed, slot). Noise is skipped entirely when noise_var == 0.
CMatrix measure_uplink(const SensingConfig& config, const CMatrix& H, std::uint64_t seed);

/// Combiner file: JSON header {m, k, n, dtype: "c64-interleaved", version: 1}, a newline,
/// then 2 * 4 * M * N * K bytes of little-endian float32 (re, im) in
/// [slot][antenna][stream] row-major order.
void save_combiner(const std::string& path, const SensingConfig& config);

/// Loads a combiner written by save_combiner or the trainer. Columns whose norm
/// drifts from 1 by more than 1e-6 are renormalised. Throws FormatError on
/// any header/payload inconsistency.
SensingConfig load_learned_combiner(const std::string& path);

} // namespace xlbt
