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
#include <initializer_list>

#include "xlbt/common.hpp"

namespace xlbt {

// Counter-based generator: the n-th output is a SplitMix64 finalisation of
// key + n * golden-gamma. Streams are addressed by hashing a tuple of ids
// (seed, trial, user, path, ...) into the key, so draws never depend on the
// order in which streams are consumed.
class KeyedRng {
  public:
    explicit KeyedRng(std::uint64_t key) : key_(key) {}
    KeyedRng(std::initializer_list<std::uint64_t> ids);

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1).
    double uniform();

    // Uniform on the open interval (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard real Gaussian (Box-Muller, both outputs used).
    double normal();

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cdouble complex_normal(double variance = 1.0);

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

// Order-sensitive hash of a tuple of ids.
std::uint64_t hash_ids(std::initializer_list<std::uint64_t> ids);

} // namespace xlbt
