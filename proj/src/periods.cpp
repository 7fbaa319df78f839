#include "legendre/periods.hpp"

#include <cmath>
#include <numbers>

namespace legendre {

namespace {

constexpr double pi = std::numbers::pi;

void check_lambda(cplx lam)
{
    if (lam == 0.0 || lam == 1.0 || !std::isfinite(lam.real()) || !std::isfinite(lam.imag()))
        throw error(errc::invalid_lambda, "lambda must be finite and differ from 0 and 1");
}

// (1/2)_n^2 / n!^2, built up incrementally by the callers.
double next_coeff(double c, long n)
{
    double r = (n - 0.5) / n;
    return c * r * r;
}

ContourPath ray_path(cplx start, cplx dir, cplx lam)
{
    ContourPath p;
    p.vertices = {start};
    p.ray = true;
    p.ray_direction = dir;
    p.endpoint_singular = {true, false};
    double far = std::max({std::abs(start), std::abs(start - 1.0), std::abs(start - lam)});
    cplx mid = start + 0.5 * dir * std::max(1.0, far);
    p.branch_seed = dir.real() > 0 ? kernel_root_principal(mid, lam) : kernel_root_negative_axis(mid, lam);
    return p;
}

} // namespace

cplx kernel_root_principal(cplx X, cplx lam)
{
    return std::sqrt(X) * std::sqrt(X - 1.0) * std::sqrt(X - lam);
}

cplx kernel_root_negative_axis(cplx X, cplx lam)
{
    return cplx(0.0, 1.0) * std::sqrt(-X) * std::sqrt(1.0 - X) * std::sqrt(lam - X);
}

cplx hypergeometric_F(cplx x, double tol)
{
    double r = std::abs(x);
    if (r >= 1.0)
        throw error(errc::series_out_of_range, "hypergeometric series needs |x| < 1");
    double c = 1.0;
    long last = 0;
    auto coeff = [&](long n) -> cplx {
        for (; last < n;)
            c = next_coeff(c, ++last);
        return c;
    };
    return sum_power_series(coeff, x, tol, std::max(r, 1e-300), 200000);
}

cplx u_series(cplx lam, double tol)
{
    double r = std::abs(lam);
    if (r > 0.5)
        throw error(errc::series_out_of_range, "u series is only used for |lambda| <= 1/2");
    const double l2 = std::log(2.0);
    double c = 1.0, gamma = 0.0;
    long last = 0;
    auto coeff = [&](long n) -> cplx {
        for (; last < n;) {
            ++last;
            c = next_coeff(c, last);
            gamma += 1.0 / (2 * last - 1) - 1.0 / (2 * last);
        }
        return cplx(0.0, c * (4.0 * l2 - 4.0 * gamma));
    };
    // 4 log 2 - 4 gamma_n is positive and decreasing, so |lambda| bounds the term ratio.
    return sum_power_series(coeff, lam, tol, std::max(r, 1e-300), 100000);
}

std::pair<cplx, cplx> periods_series(cplx lam, double tol)
{
    check_lambda(lam);
    if (std::abs(lam) > 0.9)
        throw error(errc::series_out_of_range, "omega1 series needs |lambda| <= 0.9");
    cplx w1 = pi * hypergeometric_F(lam, tol);
    cplx w2;
    if (std::abs(1.0 - lam) <= 0.9)
        w2 = cplx(0.0, pi) * hypergeometric_F(1.0 - lam, tol);
    else if (std::abs(lam) <= 0.5)
        w2 = cplx(0.0, -1.0) * (w1 / pi) * std::log(lam) + u_series(lam, tol);
    else
        throw error(errc::series_out_of_range, "no series route for omega2 at this lambda");
    return {w1, w2};
}

std::pair<cplx, cplx> periods_integral(cplx lam, double tol)
{
    check_lambda(lam);
    auto e = legendre_branch_points(lam);
    cplx w1 = integrate_sqrt_kernel(ray_path(1.0, 1.0, lam), {1.0}, e, tol).value;
    cplx w2 = integrate_sqrt_kernel(ray_path(0.0, -1.0, lam), {1.0}, e, tol).value;
    return {w1, w2};
}

std::pair<cplx, cplx> period_derivatives(cplx lam, double tol)
{
    check_lambda(lam);
    auto e = legendre_branch_points(lam);
    auto f = [lam](const KernelPoint &kp) { return 0.5 / (kp.d[2] * kp.s); };
    EngineOptions opt;
    opt.tol = tol * std::max(1.0, 1.0 / std::abs(lam));
    cplx d1 = integrate(ray_path(1.0, 1.0, lam), e, f, opt).value;
    cplx d2 = integrate(ray_path(0.0, -1.0, lam), e, f, opt).value;
    return {d1, d2};
}

std::pair<cplx, cplx> quasi_periods(cplx lam, cplx omega1, cplx omega2, cplx omega1_prime, cplx omega2_prime)
{
    cplx a = (1.0 - 2.0 * lam) / 3.0;
    cplx b = 2.0 * lam * (1.0 - lam);
    return {a * omega1 + b * omega1_prime, a * omega2 + b * omega2_prime};
}

PeriodData compute_periods(cplx lam, double tol)
{
    PeriodData pd;
    pd.lambda = lam;
    std::tie(pd.omega1, pd.omega2) = periods_integral(lam, tol);
    std::tie(pd.omega1_prime, pd.omega2_prime) = period_derivatives(lam, tol);
    std::tie(pd.eta1, pd.eta2) = quasi_periods(lam, pd.omega1, pd.omega2, pd.omega1_prime, pd.omega2_prime);
    pd.tau = pd.omega2 / pd.omega1;
    pd.area = std::abs(pd.omega1 * std::conj(pd.omega2) - pd.omega2 * std::conj(pd.omega1));
    pd.u_value = pd.omega2 + cplx(0.0, 1.0) * (pd.omega1 / pi) * std::log(lam);
    pd.route = "integral";
    return pd;
}

} // namespace legendre
