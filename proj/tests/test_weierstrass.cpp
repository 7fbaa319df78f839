#include <doctest.h>

#include <numbers>
#include <random>

#include "legendre/weierstrass.hpp"
#include "oracles.hpp"

using namespace legendre;

namespace {
cplx random_z(std::mt19937_64 &g, const PeriodData &pd)
{
    std::uniform_real_distribution<double> U(0.05, 0.95);
    return U(g) * pd.omega1 + U(g) * pd.omega2;
}
const cplx sample_lams[] = {cplx(0.3, 0.2), cplx(0.5, 0.0), cplx(1e-3, 1e-3), cplx(0.2, -0.5), cplx(1e-6, 0.0)};
} // namespace

TEST_CASE("wp against the brute-force lattice sum")
{
    std::mt19937_64 g(21);
    for (cplx lam : {cplx(0.3, 0.2), cplx(0.5, 0.0), cplx(0.2, -0.5)}) {
        PeriodData pd = compute_periods(lam);
        Lattice L(pd);
        for (int i = 0; i < 3; ++i) {
            cplx z = random_z(g, pd);
            cplx ref = oracle::wp_lattice_sum(z, pd.omega1, pd.omega2, 60);
            CHECK(std::abs(L.wp(z) - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("differential equation and derivative relations")
{
    std::mt19937_64 g(22);
    for (cplx lam : sample_lams) {
        PeriodData pd = compute_periods(lam);
        Lattice L(pd);
        for (int i = 0; i < 20; ++i) {
            cplx z = random_z(g, pd);
            cplx p = L.wp(z), dp = L.wp_prime(z);
            cplx rhs = 4.0 * p * p * p - L.g2() * p - L.g3();
            CHECK(std::abs(dp * dp - rhs) <= 1e-7 * std::max({std::abs(dp * dp), std::abs(4.0 * p * p * p), 1.0}));
            double h = 1e-5 * std::abs(pd.omega1);
            cplx fd = (L.wp(z + h) - L.wp(z - h)) / (2 * h);
            CHECK(std::abs(fd - dp) < 1e-5 * std::max(1.0, std::abs(dp)));
            cplx fz = (L.zeta(z + h) - L.zeta(z - h)) / (2 * h);
            CHECK(std::abs(fz + p) < 1e-5 * std::max(1.0, std::abs(p)));
            cplx fs = (L.log_sigma(z + h) - L.log_sigma(z - h)) / (2 * h);
            CHECK(std::abs(fs - L.zeta(z)) < 1e-5 * std::max(1.0, std::abs(L.zeta(z))));
        }
    }
}

TEST_CASE("lattice invariants match the Legendre form")
{
    for (cplx lam : sample_lams) {
        PeriodData pd = compute_periods(lam);
        Lattice L(pd);
        CHECK(std::abs(L.g2() - g2_of(lam)) < 1e-9 * std::max(1.0, std::abs(g2_of(lam))));
        CHECK(std::abs(L.g3() - g3_of(lam)) < 1e-9 * std::max(1.0, std::abs(g3_of(lam))));
        CHECK(std::abs(L.eta1() - pd.eta1) < 1e-8 * std::max(1.0, std::abs(pd.eta1)));
        CHECK(std::abs(L.eta2() - pd.eta2) < 1e-8 * std::max(1.0, std::abs(pd.eta2)));
    }
}

TEST_CASE("half-period values")
{
    for (cplx lam : sample_lams) {
        PeriodData pd = compute_periods(lam);
        Lattice L(pd);
        CHECK(std::abs(L.wp(pd.omega1 / 2.0) - (2.0 - lam) / 3.0) < 1e-8);
        CHECK(std::abs(L.wp(pd.omega2 / 2.0) + (lam + 1.0) / 3.0) < 1e-8);
        CHECK(std::abs(L.wp((pd.omega1 + pd.omega2) / 2.0) - (2.0 * lam - 1.0) / 3.0) < 1e-8);
        CHECK(std::abs(L.zeta(pd.omega1 / 2.0) - pd.eta1 / 2.0) < 1e-8 * std::max(1.0, std::abs(pd.eta1)));
    }
}

TEST_CASE("quasi-periodicity of zeta and sigma, periodicity of phi in omega1")
{
    std::mt19937_64 g(23);
    for (cplx lam : sample_lams) {
        PeriodData pd = compute_periods(lam);
        Lattice L(pd);
        for (int i = 0; i < 10; ++i) {
            cplx z = random_z(g, pd) * 0.5;
            cplx zz = L.zeta(z + pd.omega1) - L.zeta(z) - pd.eta1;
            CHECK(std::abs(zz) < 1e-8 * std::max(1.0, std::abs(pd.eta1)));
            cplx s = L.sigma(z + pd.omega2) / L.sigma(z) + std::exp(pd.eta2 * (z + pd.omega2 / 2.0));
            CHECK(std::abs(s) < 1e-7 * std::abs(std::exp(pd.eta2 * (z + pd.omega2 / 2.0))));
            CHECK(std::abs(L.phi(z + pd.omega1) - L.phi(z)) < 1e-8 * std::max(1.0, std::abs(L.phi(z))));
        }
    }
}

TEST_CASE("psi_n translates phi along omega2")
{
    std::mt19937_64 g(24);
    for (cplx lam : {cplx(0.3, 0.2), cplx(0.1, 0.0), cplx(0.4, -0.3)}) {
        PeriodData pd = compute_periods(lam);
        Lattice L(pd);
        for (long long n : {-3LL, -1LL, 1LL, 2LL, 4LL}) {
            cplx zt = random_z(g, pd);
            cplx lhs = L.log_phi(zt + double(n) * pd.omega2);
            cplx rhs = psi_n_eval(n, zt, pd.omega1, pd.omega2) + L.log_phi(zt) + (n % 2 ? cplx(0, std::numbers::pi) : 0.0);
            cplx d = (lhs - rhs) / cplx(0, 2 * std::numbers::pi);
            CHECK(std::abs(d - std::round(d.real())) < 1e-7);
        }
    }
}

TEST_CASE("pole at lattice points")
{
    PeriodData pd = compute_periods(cplx(0.3, 0.2));
    Lattice L(pd);
    CHECK_THROWS_AS(L.wp(pd.omega1), legendre::error);
}

TEST_CASE("Im(omega eta) grows like log|lambda| and the psi zero count follows it")
{
    long long prev = -1;
    for (double lam : {1e-2, 1e-4, 1e-6}) {
        PeriodData pd = compute_periods(lam);
        long long c = psi_lambda_zero_count(pd);
        double x = std::abs(im_omega_eta(pd)) / (2 * std::numbers::pi);
        CHECK(c >= (long long)std::ceil(x) - 1);
        CHECK(c > prev);
        prev = c;
    }
}
