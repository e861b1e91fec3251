// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "xlbt/codebook.hpp"

using namespace xlbt;
using Catch::Matchers::WithinAbs;

TEST_CASE("build_codebook - grid")
{
    const auto cb = build_codebook(4, 8);
    REQUIRE(cb.grid().size() == 4);
    CHECK(cb.grid(1) == -0.5);
    CHECK(cb.grid(2) == 0.0);
    CHECK(cb.grid(3) == 0.5);
    CHECK(cb.grid(4) == 1.0);

    const auto fine = build_codebook(37, 5);
    for (int i = 2; i <= 37; ++i)
        CHECK(fine.grid(i) > fine.grid(i - 1));
    CHECK(fine.grid(1) > -1.0);
    CHECK(fine.grid(37) == 1.0);

    CHECK_THROWS_AS(build_codebook(0, 4), std::domain_error);
    CHECK_THROWS_AS(build_codebook(4, 0), std::domain_error);
}

TEST_CASE("build_codebook - constant modulus and unit norm")
{
    for (auto [nq, na] : {std::pair{8, 8}, std::pair{32, 8}, std::pair{5, 3}}) {
        const auto cb = build_codebook(nq, na);
        for (int i = 1; i <= nq; ++i) {
            const auto a = cb.beam(i);
            CHECK_THAT(a.norm(), WithinAbs(1.0, 1e-12));
            for (int n = 0; n < na; ++n)
                CHECK_THAT(std::abs(a(n)), WithinAbs(1.0 / std::sqrt(na), 1e-12));
        }
    }
}

TEST_CASE("build_codebook - orthonormal when n_q = n_a")
{
    const auto cb = build_codebook(8, 8);
    const CMatrix gram = cb.beams().adjoint() * cb.beams();
    CHECK((gram - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("beam - indexing")
{
    const auto cb = build_codebook(16, 6);
    const auto last = cb.beam(16);
    // sin = 1: phase advances by pi per element
    for (int n = 0; n < 6; ++n) {
        const cdouble expect = std::polar(1.0 / std::sqrt(6.0), kPi * n);
        CHECK(std::abs(last(n) - expect) < 1e-12);
    }
    for (int n = 0; n < 6; ++n)
        CHECK_THAT(std::abs(cb.beam(1)(n)), WithinAbs(1.0 / std::sqrt(6.0), 1e-15));
    CHECK_THROWS_AS(cb.beam(17), std::out_of_range);
    CHECK_THROWS_AS(cb.beam(0), std::out_of_range);

    CHECK(cb.nearest_index(cb.grid(5)) == 5);
    CHECK(cb.nearest_index(-1.0) == 1);
    CHECK(cb.nearest_index(2.0) == 16);
}
