// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "xlbt/precoding.hpp"
#include "xlbt/rng.hpp"

using namespace xlbt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BeamSelection random_beams(int n_sub, int n_q, KeyedRng& rng)
{
    BeamSelection sel;
    for (int s = 0; s < n_sub; ++s)
        sel.indices.push_back(1 + static_cast<int>(rng.uniform() * n_q));
    return sel;
}

struct Instance {
    Codebook codebook;
    BeamSelection selection;
    CMatrix f_rf;
    CMatrix H;
};

Instance random_instance(int n_sub, int n_a, int k, int n_q, std::uint64_t seed)
{
    KeyedRng rng{0xBEEF, seed};
    Instance in{Codebook(n_q, n_a), {}, {}, {}};
    in.selection = random_beams(n_sub, n_q, rng);
    in.f_rf = assemble_analog(in.selection, in.codebook);
    in.H = oracle::random_matrix(static_cast<Eigen::Index>(n_sub) * n_a, k, rng);
    return in;
}

} // namespace

TEST_CASE("assemble_analog - block structure")
{
    const Codebook cb(4, 2);
    SECTION("single subarray is one codebook column")
    {
        const CMatrix f = assemble_analog({{3}}, cb);
        REQUIRE(f.rows() == 2);
        REQUIRE(f.cols() == 1);
        CHECK(f.col(0) == cb.beam(3));
    }
    SECTION("zero pattern for N_sub = N_a = 2")
    {
        const CMatrix f = assemble_analog({{2, 4}}, cb);
        REQUIRE(f.rows() == 4);
        REQUIRE(f.cols() == 2);
        CHECK(f(2, 0) == cdouble(0.0));
        CHECK(f(3, 0) == cdouble(0.0));
        CHECK(f(0, 1) == cdouble(0.0));
        CHECK(f(1, 1) == cdouble(0.0));
        CHECK(f.block(0, 0, 2, 1) == cb.beam(2));
        CHECK(f.block(2, 1, 2, 1) == cb.beam(4));
    }
    SECTION("orthonormal columns for any selection")
    {
        KeyedRng rng{5};
        const Codebook big(16, 8);
        for (int t = 0; t < 50; ++t) {
            const CMatrix f = assemble_analog(random_beams(6, 16, rng), big);
            CHECK((f.adjoint() * f - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("index errors")
    {
        CHECK_THROWS_AS(assemble_analog({{1, 5}}, cb), std::out_of_range);
        CHECK_THROWS_AS(assemble_analog({{0}}, cb), std::out_of_range);
    }
}

TEST_CASE("mmse_digital - scalar identity case")
{
    const CMatrix one = CMatrix::Constant(1, 1, cdouble(1.0, 0.0));
    const LinkBudget lb{1.0, 1.0};
    const auto d = mmse_digital(one, one, lb);
    CHECK_THAT(d.f_bb(0, 0).real(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(d.f_bb(0, 0).imag(), WithinAbs(0.0, 1e-12));
    CHECK_THAT(d.beta, WithinAbs(2.0, 1e-12));
    CHECK_THAT(reconstruction_mse(one, one, d.f_bb, d.beta, lb), WithinAbs(0.5, 1e-12));
    CHECK_THAT(variant_mse_loss(one, one, lb), WithinAbs(0.5, 1e-12));
}

TEST_CASE("mmse_digital - degenerate channel")
{
    const Codebook cb(4, 4);
    const CMatrix f = assemble_analog({{1, 2}}, cb);
    CHECK_THROWS_AS(mmse_digital(f, CMatrix::Zero(8, 2), LinkBudget{}), DegenerateChannelError);

    // channel living only in the orthogonal complement of the chosen beams
    CMatrix H = CMatrix::Zero(8, 1);
    H.block(0, 0, 4, 1) = cb.beam(3);
    H.block(4, 0, 4, 1) = cb.beam(4);
    CHECK_THROWS_AS(mmse_digital(f, H, LinkBudget{}), DegenerateChannelError);
    CHECK_THROWS_AS(mmse_digital(f, CMatrix::Zero(7, 2), LinkBudget{}), std::invalid_argument);
}

TEST_CASE("mmse_digital - matches a gradient-free minimiser of the reconstruction MSE")
{
    // 8 x 4 analog stage (4 subarrays of 2), K = 2
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto in = random_instance(4, 2, 2, 8, seed);
        const LinkBudget lb = LinkBudget::from_snr_db(5.0);
        const auto d = mmse_digital(in.f_rf, in.H, lb);
        const double closed = reconstruction_mse(in.H, in.f_rf, d.f_bb, d.beta, lb);
        KeyedRng rng{77, seed};
        const double searched = oracle::minimize_reconstruction_mse(in.H, in.f_rf, lb.p_t, lb.sigma2, rng);
        CHECK(std::abs(closed - searched) < 1e-4);
        // the closed form is the optimum: the search never beats it
        CHECK(searched >= closed - 1e-9);
    }
}

TEST_CASE("mmse_digital - power constraint holds with equality")
{
    KeyedRng rng{31};
    for (int t = 0; t < 200; ++t) {
        const int n_sub = 1 + static_cast<int>(rng.uniform() * 8);
        const int k = 1 + static_cast<int>(rng.uniform() * 6);
        const double p_t = 0.1 + 10.0 * rng.uniform();
        const LinkBudget lb{p_t, p_t / std::pow(10.0, (-10.0 + 40.0 * rng.uniform()) / 10.0)};
        const auto in = random_instance(n_sub, 4, k, 8, 1000 + t);
        const auto d = mmse_digital(in.f_rf, in.H, lb);
        CHECK_THAT((in.f_rf * d.f_bb).squaredNorm(), WithinRel(p_t, 1e-9));
    }
}

TEST_CASE("variant_mse_loss - closed-form values")
{
    const LinkBudget lb{1.0, 0.5};
    const Codebook cb(8, 4);
    const CMatrix f = assemble_analog({{1, 7, 3}}, cb);
    CHECK(variant_mse_loss(f, CMatrix::Zero(12, 5), lb) == 5.0);
    CHECK(variant_mse_loss_orthonormal(f, CMatrix::Zero(12, 5), lb) == 5.0);
}

TEST_CASE("variant_mse_loss - equals the reconstruction MSE at the MMSE optimum")
{
    for (int t = 0; t < 100; ++t) {
        const int n_sub = 2 + t % 5;
        const int k = 1 + t % 4;
        const auto in = random_instance(n_sub, 4, k, 8, 500 + t);
        const LinkBudget lb = LinkBudget::from_snr_db(-5.0 + 0.3 * t);
        const auto d = mmse_digital(in.f_rf, in.H, lb);
        CHECK_THAT(variant_mse_loss(in.f_rf, in.H, lb),
                   WithinAbs(reconstruction_mse(in.H, in.f_rf, d.f_bb, d.beta, lb), 1e-8));
    }
    SECTION("also for a non-orthonormal analog stage")
    {
        KeyedRng rng{8};
        for (int t = 0; t < 20; ++t) {
            const CMatrix f = oracle::random_matrix(12, 3, rng);
            const CMatrix H = oracle::random_matrix(12, 3, rng);
            const LinkBudget lb = LinkBudget::from_snr_db(10.0);
            const auto d = mmse_digital(f, H, lb);
            CHECK_THAT(variant_mse_loss(f, H, lb),
                       WithinAbs(reconstruction_mse(H, f, d.f_bb, d.beta, lb), 1e-8));
            CHECK_THAT((f * d.f_bb).squaredNorm(), WithinRel(1.0, 1e-9));
        }
    }
}

TEST_CASE("variant_mse_loss - bounds, monotonicity, simplification, scale covariance")
{
    for (int t = 0; t < 50; ++t) {
        const auto in = random_instance(4, 4, 3, 8, 900 + t);
        const LinkBudget lb = LinkBudget::from_snr_db(10.0);
        const double L = variant_mse_loss(in.f_rf, in.H, lb);
        CHECK(L > 0.0);
        CHECK(L <= 3.0);

        const LinkBudget doubled{2.0 * lb.p_t, lb.sigma2};
        CHECK(variant_mse_loss(in.f_rf, in.H, doubled) < L);

        CHECK(std::abs(variant_mse_loss_orthonormal(in.f_rf, in.H, lb) - L) < 1e-10);

        const double c = 0.25 + 3.0 * (t % 7);
        const LinkBudget scaled{lb.p_t / (c * c), lb.sigma2};
        CHECK_THAT(variant_mse_loss(in.f_rf, c * in.H, scaled), WithinAbs(L, 1e-10));
    }
    CHECK_THROWS_AS(variant_mse_loss(CMatrix::Zero(4, 2), CMatrix::Ones(4, 2), LinkBudget{}), std::domain_error);
}

TEST_CASE("reconstruction_mse - limiting cases")
{
    const auto in = random_instance(3, 4, 2, 8, 4242);
    const LinkBudget lb{1.0, 0.3};
    SECTION("zero precoder is pure source power plus noise")
    {
        const double beta = 1.7;
        CHECK_THAT(reconstruction_mse(in.H, in.f_rf, CMatrix::Zero(3, 2), beta, lb),
                   WithinAbs(2.0 + 2.0 * 0.3 / (beta * beta), 1e-14));
    }
    SECTION("perfect alignment with vanishing noise")
    {
        // choose F_BB with H^H F_RF F_BB = beta I (square effective channel K = N_sub)
        const auto sq = random_instance(2, 4, 2, 8, 4243);
        const CMatrix G = sq.H.adjoint() * sq.f_rf; // K x N_sub
        const double beta = 3.0;
        const CMatrix f_bb = beta * G.inverse();
        CHECK(reconstruction_mse(sq.H, sq.f_rf, f_bb, beta, LinkBudget{1.0, 1e-14}) < 1e-12);
    }
    CHECK_THROWS_AS(reconstruction_mse(in.H, in.f_rf, CMatrix::Zero(3, 2), 0.0, lb), std::domain_error);
}

TEST_CASE("sum_rate - zero, single user, and per-term oracle")
{
    const LinkBudget lb = LinkBudget::from_snr_db(10.0);
    const auto in = random_instance(3, 4, 2, 8, 31337);
    CHECK(sum_rate(in.H, in.f_rf, CMatrix::Zero(3, 2), lb.sigma2) == 0.0);

    const auto one = random_instance(3, 4, 1, 8, 31338);
    const auto d1 = mmse_digital(one.f_rf, one.H, lb);
    const double g = std::norm((one.H.adjoint() * one.f_rf * d1.f_bb)(0, 0));
    CHECK_THAT(sum_rate(one.H, one.f_rf, d1.f_bb, lb.sigma2), WithinRel(std::log2(1.0 + g / lb.sigma2), 1e-13));

    for (int t = 0; t < 20; ++t) {
        const auto two = random_instance(4, 4, 2, 8, 7000 + t);
        const auto d = mmse_digital(two.f_rf, two.H, lb);
        CHECK_THAT(sum_rate(two.H, two.f_rf, d.f_bb, lb.sigma2),
                   WithinRel(oracle::sum_rate_loops(two.H, two.f_rf, d.f_bb, lb.sigma2), 1e-12));
    }
}

TEST_CASE("effective forms agree with the full-matrix forms")
{
    for (int t = 0; t < 30; ++t) {
        const auto in = random_instance(5, 4, 3, 16, 8000 + t);
        const LinkBudget lb = LinkBudget::from_snr_db(3.0 * (t % 8));
        const CMatrix G = effective::channel(in.selection, in.codebook, in.H);
        CHECK((G - in.f_rf.adjoint() * in.H).norm() < 1e-12);
        CHECK_THAT(effective::loss(G, lb), WithinAbs(variant_mse_loss(in.f_rf, in.H, lb), 1e-12));
        const auto full = mmse_digital(in.f_rf, in.H, lb);
        const auto red = effective::mmse(G, lb);
        CHECK((full.f_bb - red.f_bb).norm() < 1e-10 * full.f_bb.norm());
        CHECK_THAT(red.beta, WithinRel(full.beta, 1e-10));
        CHECK_THAT(effective::sum_rate(G, red.f_bb, lb.sigma2),
                   WithinRel(sum_rate(in.H, in.f_rf, full.f_bb, lb.sigma2), 1e-10));
    }
}

TEST_CASE("LinkBudget - SNR convention")
{
    const auto lb = LinkBudget::from_snr_db(20.0);
    CHECK(lb.p_t == 1.0);
    CHECK_THAT(lb.sigma2, WithinRel(0.01, 1e-14));
    CHECK_THROWS_AS((LinkBudget{0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LinkBudget{1.0, 0.0}.validate()), std::invalid_argument);
}
