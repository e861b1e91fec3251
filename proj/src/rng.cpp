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

#include "xlbt/rng.hpp"

#include <cmath>

namespace xlbt {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x)
{
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_ids(std::initializer_list<std::uint64_t> ids)
{
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (auto id : ids)
        h = mix64(h + kGamma + mix64(id + kGamma));
    return h;
}

KeyedRng::KeyedRng(std::initializer_list<std::uint64_t> ids) : key_(hash_ids(ids)) {}

std::uint64_t KeyedRng::next_u64()
{
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double KeyedRng::uniform()
{
    // 53 random bits, shifted by half an ulp so 0 and 1 are never returned
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double KeyedRng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * kPi * u2);
}

cdouble KeyedRng::complex_normal(double variance)
{
    double s = std::sqrt(0.5 * variance);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
}

} // namespace xlbt
