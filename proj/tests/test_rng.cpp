// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "xlbt/rng.hpp"

using namespace xlbt;

TEST_CASE("KeyedRng - streams are addressed by id tuple")
{
    KeyedRng a{1, 2, 3};
    KeyedRng b{1, 2, 3};
    KeyedRng c{1, 3, 2};
    for (int i = 0; i < 10; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
}

TEST_CASE("KeyedRng - uniform stays in the open unit interval")
{
    KeyedRng rng{42};
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("KeyedRng - complex normal has the requested variance")
{
    KeyedRng rng{7, 7};
    const int n = 200000;
    double power = 0.0;
    cdouble mean{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const cdouble z = rng.complex_normal(2.0);
        power += std::norm(z);
        mean += z;
    }
    CHECK(std::abs(power / n - 2.0) < 0.03);
    CHECK(std::abs(mean / static_cast<double>(n)) < 0.01);
}
