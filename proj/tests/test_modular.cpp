#include <doctest.h>

#include <numbers>
#include <random>

#include "legendre/modular.hpp"
#include "oracles.hpp"

using namespace legendre;

TEST_CASE("classification of F")
{
    CHECK(classify_lambda(0.5).in_F);
    CHECK(classify_lambda(cplx(0.3, 0.2)).in_F);
    CHECK_FALSE(classify_lambda(cplx(0.7, 0.2)).in_F);
    CHECK(classify_lambda(cplx(0.7, 0.2)).in_Gamma);
    CHECK_FALSE(classify_lambda(2.0).in_Gamma);
}

TEST_CASE("S3 reduction lands in F and preserves j")
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        cplx lam(U(g), U(g));
        if (std::abs(lam) < 1e-3 || std::abs(lam - 1.0) < 1e-3)
            continue;
        ReducedLambda r = reduce_lambda_to_F(lam);
        CHECK(r.param.in_F);
        CHECK(std::abs(s3_orbit(lam)[r.orbit_index] - r.param.lambda) < 1e-15 * (1 + std::abs(lam)));
        cplx j0 = j_invariant(lam), j1 = j_invariant(r.param.lambda);
        CHECK(std::abs(j0 - j1) < 1e-9 * (1 + std::abs(j0)));
    }
}

TEST_CASE("tau reduction reaches the maximal imaginary part of the orbit")
{
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> U(-2.0, 2.0), V(0.05, 1.5);
    for (int i = 0; i < 50; ++i) {
        cplx tau(U(g), V(g));
        TauReduction t = reduce_tau_standard(tau);
        CHECK(std::abs(t.tau_reduced.real()) <= 0.5 + 1e-12);
        CHECK(std::abs(t.tau_reduced) >= 1.0 - 1e-12);
        CHECK(std::abs(t.matrix.apply(tau) - t.tau_reduced) < 1e-10);
        CHECK(t.tau_reduced.imag() >= oracle::max_im_orbit(tau) - 1e-10);
    }
}

TEST_CASE("j from lambda against j from the q-expansion")
{
    std::mt19937_64 g(4);
    for (int i = 0; i < 40; ++i) {
        cplx lam = oracle::random_lambda_F(g, -3.0);
        PeriodData pd = compute_periods(lam);
        cplx j0 = j_invariant(lam), j1 = j_from_tau(pd.tau);
        CHECK(std::abs(j0 - j1) < 1e-7 * std::abs(j0));
    }
}

TEST_CASE("tau of a lambda in F lies in the standard domain and the q-product stays large")
{
    std::mt19937_64 g(8);
    for (int i = 0; i < 200; ++i) {
        cplx lam = oracle::random_lambda_F(g);
        PeriodData pd = compute_periods(lam);
        cplx tau = pd.omega2 / pd.omega1;
        CHECK(std::abs(tau.real()) <= 0.5 + 1e-9);
        CHECK(std::abs(tau) >= 1.0 - 1e-9);
        CHECK(std::min(std::abs(pd.omega1), std::abs(pd.omega2)) >= 1.0);
        cplx q = std::exp(cplx(0, 2 * std::numbers::pi) * tau);
        CHECK(std::abs(eta_product24(q)) >= 0.9);
    }
}

TEST_CASE("area lower bound on Gamma")
{
    std::mt19937_64 g(12);
    for (int i = 0; i < 100; ++i) {
        cplx lam = oracle::random_lambda_F(g);
        if (i % 2)
            lam = 1.0 - std::conj(lam);
        LegendreParam p = classify_lambda(lam);
        REQUIRE(p.in_Gamma);
        CHECK(area_lower_bound_check(p, compute_periods(lam)).ok);
    }
}

TEST_CASE("discriminant relation on the reduced basis")
{
    for (cplx lam : {cplx(0.3, 0.2), cplx(1e-4, 0.0), cplx(0.5, 0.5)}) {
        ModularInvariants m = modular_invariants(classify_lambda(lam), compute_periods(lam));
        CHECK(m.disc_relation_residual < 1e-9);
    }
}
