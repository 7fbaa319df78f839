#pragma once

// Periods, period derivatives and quasi-periods of E_lambda: Y^2 = X(X-1)(X-lambda).
// omega1 = int_1^inf dX / sqrt(...), omega2 = int_0^-inf dX / sqrt(...) with
// sqrt = i sqrt(-X(X-1)(X-lambda)) on the negative axis.

#include <string>
#include <utility>

#include "legendre/contour.hpp"

namespace legendre {

struct PeriodData {
    cplx lambda;
    cplx omega1, omega2;
    cplx omega1_prime, omega2_prime;
    cplx eta1, eta2;
    cplx tau;
    double area = 0.0; // |omega1 conj(omega2) - omega2 conj(omega1)|
    cplx u_value;      // omega2 + i (omega1/pi) log(lambda)
    std::string route; // "integral" or "series"
};

// Gauss 2F1(1/2, 1/2; 1; x), |x| < 1.
cplx hypergeometric_F(cplx x, double tol = 1e-15);

// u(lambda) = i sum (1/2)_n^2 (4 log 2 - 4 gamma_n) / n!^2 lambda^n, |lambda| <= 1/2.
cplx u_series(cplx lam, double tol = 1e-15);

std::pair<cplx, cplx> periods_series(cplx lam, double tol = 1e-14);
std::pair<cplx, cplx> periods_integral(cplx lam, double tol = 1e-12);
std::pair<cplx, cplx> period_derivatives(cplx lam, double tol = 1e-12);
std::pair<cplx, cplx> quasi_periods(cplx lam, cplx omega1, cplx omega2, cplx omega1_prime, cplx omega2_prime);

// Everything for one lambda via the integral route.
PeriodData compute_periods(cplx lam, double tol = 1e-12);

// Seed for a path starting at a branch point and leaving it through `mid`:
// principal factors on [1, inf), i sqrt(-X) sqrt(1-X) sqrt(lam-X) elsewhere.
cplx kernel_root_principal(cplx X, cplx lam);
cplx kernel_root_negative_axis(cplx X, cplx lam);

} // namespace legendre
