#include <doctest.h>

#include "legendre/errors.hpp"
#include "legendre/pfaffian.hpp"

using namespace legendre;

TEST_CASE("catalogued chains")
{
    auto m = catalog_chain(ChainKind::macintyre_inverse);
    CHECK(m.order == 7);
    CHECK(m.alpha == 9);
    CHECK(m.beta == 1);
    auto e = catalog_chain(ChainKind::exponential);
    CHECK(e.order == 3);
    CHECK(e.alpha == 2);
    CHECK(e.beta == 6);
    CHECK(catalog_chain(ChainKind::zeta_extended).order == 9);
    CHECK(catalog_chain(ChainKind::phi_extended).order == 11);
}

TEST_CASE("theorem format tuples")
{
    PfaffianFormat wp = compose_theorem_format(TheoremFunction::wp);
    PfaffianFormat ze = compose_theorem_format(TheoremFunction::zeta);
    PfaffianFormat ph = compose_theorem_format(TheoremFunction::phi);
    CHECK(to_string(wp) == "(7,9,1,4,144503,2)");
    CHECK(to_string(ze) == "(9,9,1,6,144503,4)");
    CHECK(to_string(ph) == "(17,9,6,10,114565235503,8)");
    CHECK(wp.L == bigint(10) * 2 * 85 * 85 + 3);
    CHECK(ph.L == bigint(144500) * 769 * 1031 + 3);
}

TEST_CASE("piece count follows its parameters")
{
    PieceCount pc;
    pc.betti_bound = 41;
    CHECK(theorem_piece_count(TheoremFunction::wp, pc) == bigint(10) * 2 * 83 * 83);
    pc = {};
    pc.log_bound = 0;
    pc.psi_bound = 0;
    CHECK(theorem_piece_count(TheoremFunction::phi, pc) == theorem_piece_count(TheoremFunction::wp, pc));
}

TEST_CASE("union adds pieces, projection keeps the format")
{
    PfaffianFormat a = compose_theorem_format(TheoremFunction::wp);
    PfaffianFormat u = format_union({a, a, a});
    CHECK(u.L == 3 * a.L);
    CHECK(u.r == a.r);
    CHECK(u.M == a.M);
    CHECK(format_projection(a) == a);
    // wide integers do not overflow
    std::vector<PfaffianFormat> many(1000, compose_theorem_format(TheoremFunction::phi));
    CHECK(format_union(many).L == bigint(1000) * 114565235503LL);
}

TEST_CASE("zero bound against the corollary constant")
{
    PfaffianFormat wp = compose_theorem_format(TheoremFunction::wp);
    ZeroBound z = khovanskii_zero_bound(wp, 20);
    CHECK_FALSE(z.degree_too_small);
    CHECK(z.value <= corollary_anchor(20));
    CHECK(z.value * 10 >= corollary_anchor(20));
    CHECK(khovanskii_zero_bound(wp, 19).degree_too_small);
    bigint prev = 0;
    for (long long T : {20, 50, 100, 200}) {
        bigint v = khovanskii_zero_bound(wp, T).value;
        CHECK(v >= prev);
        CHECK(v <= corollary_anchor(T));
        prev = v;
    }
}

TEST_CASE("component bound is monotone in each parameter")
{
    for (long long r = 0; r < 6; ++r)
        for (long long a = 0; a < 6; ++a)
            for (long long b = 1; b < 6; ++b) {
                bigint v = component_bound(r, a, b, 4);
                CHECK(component_bound(r + 1, a, b, 4) >= v);
                CHECK(component_bound(r, a + 1, b, 4) >= v);
                CHECK(component_bound(r, a, b + 1, 4) >= v);
            }
}

TEST_CASE("chain-free case is a Bezout-type count")
{
    // beta (2 beta - 1)^(n - 1)
    CHECK(component_bound(0, 0, 3, 2) == 3 * 5);
    CHECK(component_bound(0, 0, 2, 3) == 2 * 3 * 3);
}

TEST_CASE("domain change intersections grow with the matrix entries")
{
    DomainChangeResult r5 = domain_change_growth(0.3, 5, 1, 4, 1, 8000);
    DomainChangeResult r11 = domain_change_growth(0.3, 11, 1, 10, 1, 8000);
    CHECK(r5.count >= 2);
    CHECK(r11.count >= 5);
    CHECK(r11.count > r5.count);
    CHECK(r11.max_residual < 1e-9);
    CHECK_THROWS_AS(domain_change_growth(0.3, 1, 0, 0, 1), legendre::error);
    CHECK_THROWS_AS(domain_change_growth(0.3, 2, 1, 1, 2), legendre::error);
}
