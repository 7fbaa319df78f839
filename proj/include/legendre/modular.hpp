#pragma once

// S3 action on lambda, SL2(Z) reduction of tau, j, discriminant, Delta(tau), area.

#include <array>
#include <string>
#include <vector>

#include "legendre/periods.hpp"

namespace legendre {

struct LegendreParam {
    cplx lambda;
    bool in_Gamma = false;
    bool in_F = false;
    bool on_A = false;
    bool on_A_star = false;
};

// Boundary comparisons use this slack so that points produced by the orbit
// maps (which round) still land in the closed sets.
constexpr double domain_slack = 1e-12;

LegendreParam classify_lambda(cplx lam);

// {l, 1/l, 1-l, 1/(1-l), l/(l-1), (l-1)/l}
std::array<cplx, 6> s3_orbit(cplx lam);

struct ReducedLambda {
    LegendreParam param;
    int orbit_index = 0;
};
ReducedLambda reduce_lambda_to_F(cplx lam);

// Integer matrix [[a, b], [c, d]] acting by (a tau + b)/(c tau + d).
struct Mat2 {
    long long a = 1, b = 0, c = 0, d = 1;
    Mat2 operator*(const Mat2 &o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse() const { return {d, -b, -c, a}; } // determinant 1
    cplx apply(cplx tau) const { return (double(a) * tau + double(b)) / (double(c) * tau + double(d)); }
};

struct TauReduction {
    cplx tau_reduced;
    std::vector<std::string> word; // applied in order: "T", "T^-1", "S"
    Mat2 matrix;                   // tau_reduced = matrix.apply(tau)
};
TauReduction reduce_tau_standard(cplx tau);

cplx j_invariant(cplx lam);
cplx g2_of(cplx lam);
cplx g3_of(cplx lam);

// prod (1 - q^n)^24, truncated once |q^n| < 1e-17.
cplx eta_product24(cplx q);
cplx discriminant_delta(cplx tau);
// Klein j from the q-expansion ratio E4^3 / Delta.
cplx j_from_tau(cplx tau);

struct ModularInvariants {
    cplx j, D, g2, g3, tau, q, delta;
    double area = 0.0;
    double disc_relation_residual = 0.0; // |D - (2 pi / omega)^12 Delta| / |D| on the reduced basis
    cplx omega;                          // omega with (omega, omega tau) a reduced basis
};
ModularInvariants modular_invariants(const LegendreParam &lam, const PeriodData &periods);

struct AreaCheck {
    double lhs = 0.0, rhs = 0.0;
    bool ok = false;
};
AreaCheck area_lower_bound_check(const LegendreParam &lam, const PeriodData &periods);

} // namespace legendre
