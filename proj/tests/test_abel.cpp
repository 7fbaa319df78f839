#include <doctest.h>

#include <numbers>
#include <random>

#include "legendre/abel.hpp"
#include "oracles.hpp"

using namespace legendre;
constexpr double pi = std::numbers::pi;

namespace {
const cplx lams[] = {cplx(0.3, 0.2), cplx(0.5, 0.0), cplx(1e-3, 0.0), cplx(0.2, -0.5), cplx(1e-6, 1e-6),
                     cplx(0.45, 0.6)};

std::vector<Region> regions_for(cplx lam)
{
    std::vector<Region> r;
    for (int j = 1; j <= 10; ++j) {
        Region x = Region(j);
        if (lam.imag() == 0.0 && (x == Region::V2 || x == Region::V3 || x == Region::V5 || x == Region::V6))
            continue;
        r.push_back(x);
    }
    return r;
}
} // namespace

TEST_CASE("abelian integral at the branch points gives the half periods")
{
    for (cplx lam : lams) {
        AbelMap m(lam);
        const PeriodData &pd = m.periods();
        CHECK(std::abs(m.z(make_point(lam, 0.0)) - pd.omega2 / 2.0) < 1e-9 * std::abs(pd.omega1));
        CHECK(std::abs(m.z(make_point(lam, 1.0)) - pd.omega1 / 2.0) < 1e-9 * std::abs(pd.omega1));
        CHECK(std::abs(m.z(make_point(lam, lam)) - (pd.omega1 + pd.omega2) / 2.0) < 1e-9 * std::abs(pd.omega1));
    }
}

TEST_CASE("wp inverts the abelian integral in every region")
{
    for (cplx lam : lams) {
        AbelMap m(lam);
        for (Region r : regions_for(lam))
            for (unsigned k = 0; k < 15; ++k) {
                SlitPlanePoint p = sample_region(lam, r, 100 * k + 7);
                AbelValue a = m.eval(p);
                cplx expect = p.xi - (lam + 1.0) / 3.0;
                CAPTURE(lam);
                CAPTURE(p.xi);
                CHECK(std::abs(m.lattice().wp(a.z) - expect) < 1e-8 * std::max(1.0, std::abs(expect)));
                // zeta through the second-kind integral
                cplx zt = m.lattice().zeta(a.z);
                CHECK(std::abs(zt - a.zeta) < 1e-8 * std::max(1.0, std::abs(zt)));
            }
    }
}

TEST_CASE("derivative of z is -1/(2s)")
{
    cplx lam(0.3, 0.2);
    AbelMap m(lam);
    for (cplx xi : {cplx(2.0, 1.0), cplx(-0.5, 0.7), cplx(0.6, -0.1)}) {
        double h = 1e-5;
        AbelValue a = m.eval(make_point(lam, xi));
        cplx fd = (m.z(make_point(lam, xi + h)) - m.z(make_point(lam, xi - h))) / (2 * h);
        CHECK(std::abs(fd + 0.5 / a.s) < 1e-6 * std::abs(0.5 / a.s));
    }
}

TEST_CASE("Betti coordinates stay below 42 including tiny lambda")
{
    double worst = 0.0;
    for (cplx lam : lams) {
        AbelMap m(lam);
        for (Region r : regions_for(lam))
            for (unsigned k = 0; k < 30; ++k) {
                BettiCoords b = betti(m, sample_region(lam, r, 31 * k + 1));
                worst = std::max({worst, std::abs(b.b1), std::abs(b.b2)});
            }
    }
    CHECK(worst <= 42.0);
}

TEST_CASE("north and south limits on the slits")
{
    for (cplx lam : {cplx(0.3, 0.2), cplx(1e-4, -1e-4), cplx(0.5, 0.0)}) {
        AbelMap m(lam);
        for (cplx xi : {cplx(-3.0), cplx(-1e-2), 0.5 * lam, 0.9 * lam, cplx(1.5), cplx(40.0)}) {
            NorthSouthSample s = north_south(m, xi);
            CAPTURE(xi);
            CHECK(s.ok);
            CHECK(s.relation_residual < 1e-9);
            CHECK(s.betti_gap <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("a point on a slit needs a side")
{
    AbelMap m(cplx(0.3, 0.2));
    CHECK_THROWS_AS(m.eval(make_point(cplx(0.3, 0.2), -2.0)), legendre::error);
}

TEST_CASE("L matches log phi up to 2 pi i and the decomposition closes")
{
    for (cplx lam : {cplx(0.3, 0.2), cplx(1e-3, 0.0), cplx(0.2, -0.5)}) {
        AbelMap m(lam);
        cplx base = m.lattice().log_phi(m.periods().omega1 / 2.0);
        for (Region r : regions_for(lam))
            for (unsigned k = 0; k < 5; ++k) {
                SlitPlanePoint p = sample_region(lam, r, 17 * k + 3);
                LogPhiTerms t = log_phi_terms(m, p);
                cplx d = (t.L - (m.lattice().log_phi(t.z) - base)) / cplx(0, 2 * pi);
                CHECK(std::abs(d - std::round(d.real())) < 1e-7);
                CHECK(std::abs(t.LL1_residual) < 1e-8);
                CHECK(std::abs(t.L.imag()) <= 2409.0);
            }
    }
}

TEST_CASE("numerator bounds on the three boundaries")
{
    for (cplx lam : {cplx(0.3, 0.2), cplx(1e-5, 0.0), cplx(1e-3, -1e-3)}) {
        AbelMap m(lam);
        for (Boundary b : {Boundary::neg_axis, Boundary::L_lambda, Boundary::one_infty}) {
            NumeratorReport r = numerator_bound_check(m, b, 200);
            CHECK(r.ok);
            CHECK(r.max_ratio <= 1.0);
        }
    }
}

TEST_CASE("R-term bounds")
{
    cplx lam(0.2, 0.1);
    AbelMap m(lam);
    for (cplx xi : {cplx(3.0, 2.0), cplx(-0.5, 0.1), cplx(0.1, 0.02), cplx(0.6, -0.3)}) {
        RTermsReport r = R_terms_bound_check(m, xi);
        for (const auto &c : r.checks) {
            CAPTURE(c.name);
            CHECK(c.ok);
        }
    }
}

TEST_CASE("graph reconstruction of wp and zeta")
{
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (cplx lam : {cplx(0.3, 0.2), cplx(0.5, 0.0), cplx(1e-4, 1e-4)}) {
        AbelMap m(lam);
        const PeriodData &pd = m.periods();
        for (int i = 0; i < 60; ++i) {
            cplx z = U(g) * pd.omega1 + U(g) * pd.omega2;
            if (std::abs(z) < 1e-3)
                continue;
            WpGraphPoint w = reconstruct_wp_graph(m, z);
            cplx ref = m.lattice().wp(z);
            CHECK(std::abs(w.value - ref) < 1e-7 * std::max(1.0, std::abs(ref)));
            CHECK(std::max(std::abs(w.m), std::abs(w.n)) <= 42);
            cplx zr = m.lattice().zeta(z);
            CHECK(std::abs(reconstruct_zeta_graph(m, z) - zr) < 1e-7 * std::max(1.0, std::abs(zr)));
        }
    }
}

TEST_CASE("monodromy: group law and generators")
{
    CHECK(monodromy_rho(parse_word("g1 g1")) == MonodromyElement{1, 0, 0});
    CHECK(monodromy_generator(1) == MonodromyElement{-1, 0, 1});
    CHECK(monodromy_generator(2) == MonodromyElement{-1, 1, 0});
    CHECK(monodromy_generator(3) == MonodromyElement{-1, 1, 1});
    CHECK(parse_word("g1*g2^-1 g3'") == std::vector<int>{1, -2, -3});
    CHECK_THROWS(parse_word("g4"));

    std::mt19937_64 g(77);
    std::uniform_int_distribution<int> L(0, 12), G(1, 3), S(0, 1);
    for (int i = 0; i < 100; ++i) {
        std::vector<int> u, v;
        for (int k = L(g); k > 0; --k)
            u.push_back(S(g) ? G(g) : -G(g));
        for (int k = L(g); k > 0; --k)
            v.push_back(S(g) ? G(g) : -G(g));
        std::vector<int> uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        CHECK(monodromy_rho(uv) == monodromy_rho(u) * monodromy_rho(v));
        MonodromyElement e = monodromy_rho(u);
        CHECK(e * e.inverse() == MonodromyElement{});
        // the action on Betti pairs composes the same way
        std::array<double, 2> b{0.25, -0.6};
        auto lhs = monodromy_rho(uv).apply(b), rhs = monodromy_rho(v).apply(monodromy_rho(u).apply(b));
        CHECK(std::abs(lhs[0] - rhs[0]) < 1e-12);
        CHECK(std::abs(lhs[1] - rhs[1]) < 1e-12);
    }
}

TEST_CASE("numeric loops reproduce the generators")
{
    for (cplx lam : {cplx(0.3, 0.2), cplx(0.2, -0.5), cplx(1e-5, 1e-5), cplx(0.5, 0.0)}) {
        AbelMap m(lam);
        for (int k = 0; k < 3; ++k) {
            MonodromyNumeric r = monodromy_numeric(m, standard_loop(lam, k));
            CAPTURE(lam);
            CAPTURE(k);
            CHECK(r.element == monodromy_generator(k + 1));
            CHECK(r.residual < 1e-6);
        }
    }
}

TEST_CASE("Macintyre chain partials and identities")
{
    cplx lam(0.3, 0.2);
    AbelMap m(lam);
    for (Region r : regions_for(lam)) {
        ChainAuditReport a = chain_derivative_audit(m, r, 8, 3);
        CAPTURE(region_name(r));
        CHECK(a.ok);
    }
}
