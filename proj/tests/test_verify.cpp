#include <doctest.h>

#include <algorithm>

#include "legendre/errors.hpp"
#include "legendre/modular.hpp"
#include "legendre/verify.hpp"

using namespace legendre;

TEST_CASE("sampled lambdas lie in F")
{
    for (std::uint64_t k = 0; k < 500; ++k)
        CHECK(classify_lambda(sample_lambda_F(k)).in_F);
    for (cplx l : sweep_lambdas(1, 30))
        CHECK(classify_lambda(l).in_F);
}

TEST_CASE("reports are independent of the thread count")
{
    RunConfig a;
    a.samples = 60;
    a.threads = 1;
    RunConfig b = a;
    b.threads = 4;
    for (const char *s : {"betti42", "legendre", "psi515"}) {
        VerificationReport ra = run_suite(s, a), rb = run_suite(s, b);
        REQUIRE(ra.records.size() == rb.records.size());
        for (size_t i = 0; i < ra.records.size(); ++i) {
            CHECK(ra.records[i].value == rb.records[i].value);
            CHECK(ra.records[i].check == rb.records[i].check);
        }
        CHECK(ra.max_value == rb.max_value);
    }
}

TEST_CASE("aggregate max is the max over records")
{
    RunConfig c;
    c.samples = 40;
    for (const auto &s : suite_names()) {
        if (s == "numerators" || s == "chain_audit")
            c.samples = 20;
        else
            c.samples = 40;
        VerificationReport r = run_suite(s, c);
        double m = 0.0;
        for (const auto &x : r.records)
            if (x.error.empty() && x.cmp == Compare::le)
                m = std::max(m, x.value);
        CAPTURE(s);
        CHECK(r.max_value == m);
        CHECK(r.pass);
    }
}

TEST_CASE("bad configuration is rejected")
{
    RunConfig c;
    c.tol = 0.5;
    CHECK_THROWS_AS(run_suite("legendre", c), legendre::error);
    CHECK_THROWS_AS(run_suite("nope", RunConfig{}), legendre::error);
}
