#pragma once

// Format algebra for pfaffian chains and piecewise semi/sub-pfaffian sets.

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "legendre/periods.hpp"

namespace legendre {

using bigint = boost::multiprecision::cpp_int;

// (r, alpha, beta, n, L, M): chain order, chain degree, function degree,
// ambient dimension, number of pieces, equations per piece.
struct PfaffianFormat {
    long long r = 0, alpha = 0, beta = 0, n = 0;
    bigint L = 0;
    long long M = 0;
    bool operator==(const PfaffianFormat &o) const = default;
};
std::string to_string(const PfaffianFormat &f);

enum class ChainKind { macintyre_inverse, exponential, zeta_extended, phi_extended };

struct ChainSpec {
    std::string name;
    ChainKind kind;
    long long order = 0;
    long long alpha = 0, beta = 0;
    std::string domain;
};
ChainSpec catalog_chain(ChainKind kind);
const char *chain_name(ChainKind kind);

// Builds a format piece by piece: chains attached to disjoint groups of
// variables add their orders; degrees take the maximum.
class FormatBuilder {
public:
    FormatBuilder &chain(ChainKind kind);
    FormatBuilder &variables(long long k);
    // a real equation p(x, f) = 0 whose polynomial has degree beta in the chain
    FormatBuilder &equations(long long k, long long beta);
    FormatBuilder &pieces(const bigint &L);
    PfaffianFormat build() const;

private:
    long long r_ = 0, alpha_ = 0, beta_ = 0, n_ = 0, M_ = 0;
    bigint L_ = 1;
};

// Union of sets with the same chain data: pieces add, the rest is the maximum.
PfaffianFormat format_union(const std::vector<PfaffianFormat> &parts);
// Coordinate projection of a subpfaffian set keeps the complexity of the source.
PfaffianFormat format_projection(const PfaffianFormat &f);

enum class TheoremFunction { wp, zeta, phi };
const char *function_name(TheoremFunction w);

struct PieceCount {
    long long regions = 10, branches = 2, betti_bound = 42;
    long long log_bound = 384, psi_bound = 515;
    long long explicit_points = 3;
};
// regions * branches * (2 B + 1)^2 [* (2 K + 1)(2 P + 1)]; explicit points counted separately
bigint theorem_piece_count(TheoremFunction w, const PieceCount &pc = {});
PfaffianFormat compose_theorem_format(TheoremFunction w, const PieceCount &pc = {});

// Connected-component bound for {f_1 = ... = f_k = 0} in R^n with chain
// order r, degree alpha and equation degree beta:
// 2^(r(r-1)/2) beta (alpha + 2 beta - 1)^(n-1) ((2n-1)(alpha + beta) - 2n + 2)^r.
bigint component_bound(long long r, long long alpha, long long beta, long long n);

struct ZeroBound {
    bigint value;
    long long T = 0;
    long long effective_beta = 0;
    bool degree_too_small = false; // T < 20: computed anyway
};
// Zeros of P(z, f(z)) on one graph piece for deg P <= T. The equation
// degree fed to the component bound is T + beta + 1.
ZeroBound khovanskii_zero_bound(const PfaffianFormat &f, long long T);
// 7.5373e14 T^11, rounded up to an integer
bigint corollary_anchor(long long T);

struct DomainChangeResult {
    long long count = 0;
    long long n = 0;
    std::vector<cplx> points;   // intersection values in C
    std::vector<double> r_on_c; // parameter on C = wp(r omega2)
    std::vector<double> r_on_cn;
    double max_residual = 0.0;
};
// Intersections of C = wp(r omega2) and C_n = wp(r (a omega1 + b omega2)), r in (0, 1).
DomainChangeResult domain_change_growth(cplx lam, long long a, long long b, long long c, long long d,
                                        int grid = 20000);

} // namespace legendre
