#pragma once

// Independent reference computations used by the tests. None of these share
// code with the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>

namespace oracle {

using cplx = std::complex<double>;

// Arithmetic-geometric mean with the right choice of root (|a - b| <= |a + b|).
inline cplx agm(cplx a, cplx b)
{
    for (int i = 0; i < 100 && std::abs(a - b) > 1e-16 * std::abs(a); ++i) {
        cplx an = (a + b) / 2.0;
        cplx bn = std::sqrt(a * b);
        if (std::abs(an - bn) > std::abs(an + bn))
            bn = -bn;
        a = an;
        b = bn;
    }
    return a;
}

// omega1 = 2 K(lambda) = pi / agm(1, sqrt(1 - lambda)), omega2 = i pi / agm(1, sqrt(lambda))
inline cplx omega1_agm(cplx lam) { return std::numbers::pi / agm(1.0, std::sqrt(1.0 - lam)); }
inline cplx omega2_agm(cplx lam) { return cplx(0.0, std::numbers::pi) / agm(1.0, std::sqrt(lam)); }

// 2F1(1/2, 1/2; 1; x) by direct summation, |x| < 0.9
inline cplx hyp_series(cplx x)
{
    cplx term = 1.0, sum = 1.0;
    for (int n = 1; n < 5000; ++n) {
        term *= x * std::pow((n - 0.5) / n, 2);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

// wp by a symmetric lattice sum over |m|, |n| <= N with Richardson extrapolation
// in N (truncation error a/N^2 + b/N^4 + ...).
inline cplx wp_partial(cplx z, cplx w1, cplx w2, int N)
{
    cplx s = 1.0 / (z * z);
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0)
                continue;
            cplx w = double(m) * w1 + double(n) * w2;
            s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
        }
    return s;
}

inline cplx wp_lattice_sum(cplx z, cplx w1, cplx w2, int N = 100)
{
    cplx a = wp_partial(z, w1, w2, N), b = wp_partial(z, w1, w2, 2 * N), c = wp_partial(z, w1, w2, 4 * N);
    cplx r1 = (4.0 * b - a) / 3.0, r2 = (4.0 * c - b) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

// max Im over the SL2(Z) orbit of tau by brute force over |c|, |d| <= B
inline double max_im_orbit(cplx tau, int B = 30)
{
    double best = 0.0;
    for (int c = -B; c <= B; ++c)
        for (int d = -B; d <= B; ++d) {
            if (std::gcd(c, d) != 1)
                continue;
            best = std::max(best, tau.imag() / std::norm(double(c) * tau + double(d)));
        }
    return best;
}

inline cplx random_lambda_F(std::mt19937_64 &g, double log_min = -6.0)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double rho = std::pow(10.0, log_min * U(g));
    double lo = rho / 2.0, hi = std::min(1.0, 1.0 / (2.0 * rho));
    double c = lo + (hi - lo) * U(g);
    double th = std::acos(c) * (U(g) < 0.5 ? -1.0 : 1.0);
    return std::polar(rho, th);
}

} // namespace oracle
