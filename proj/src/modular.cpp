#include "legendre/modular.hpp"

#include <algorithm>
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

} // namespace

LegendreParam classify_lambda(cplx lam)
{
    check_lambda(lam);
    LegendreParam p;
    p.lambda = lam;
    const double eps = domain_slack;
    p.in_Gamma = std::abs(lam) <= 1.0 + eps && std::abs(1.0 - lam) <= 1.0 + eps;
    p.in_F = p.in_Gamma && lam.real() <= 0.5 + eps;
    auto on_A = [eps](cplx l) {
        if (!(l.imag() < 0.0))
            return false;
        bool circle = std::abs(std::abs(1.0 - l) - 1.0) <= eps && l.real() <= 0.5 + eps;
        bool line = std::abs(l.real() - 0.5) <= eps;
        return circle || line;
    };
    p.on_A = on_A(lam);
    p.on_A_star = on_A(std::conj(lam));
    return p;
}

std::array<cplx, 6> s3_orbit(cplx lam)
{
    check_lambda(lam);
    return {lam, 1.0 / lam, 1.0 - lam, 1.0 / (1.0 - lam), lam / (lam - 1.0), (lam - 1.0) / lam};
}

ReducedLambda reduce_lambda_to_F(cplx lam)
{
    auto orbit = s3_orbit(lam);
    int best = -1;
    LegendreParam bp;
    for (int k = 0; k < 6; ++k) {
        LegendreParam p = classify_lambda(orbit[k]);
        if (!p.in_F)
            continue;
        if (best < 0 || (bp.on_A && !p.on_A)) {
            best = k;
            bp = p;
        }
    }
    if (best < 0)
        throw error(errc::invalid_lambda, "no orbit member lies in the fundamental set");
    return {bp, best};
}

TauReduction reduce_tau_standard(cplx tau)
{
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()))
        throw error(errc::not_upper_half_plane, "tau must lie in the upper half plane");
    TauReduction r;
    const double eps = 1e-13;
    cplx t = tau;
    Mat2 M;
    const Mat2 S{0, -1, 1, 0};
    for (int iter = 0; iter < 10000; ++iter) {
        double shift = std::floor(t.real() + 0.5);
        if (shift != 0.0) {
            auto k = static_cast<long long>(shift);
            t -= shift;
            M = Mat2{1, -k, 0, 1} * M;
            for (long long i = 0; i < std::llabs(k); ++i)
                r.word.push_back(k > 0 ? "T^-1" : "T");
        }
        double n = std::norm(t);
        bool inside = n > 1.0 + eps;
        bool on_circle = !inside && n >= 1.0 - eps;
        if (inside || (on_circle && (t.real() >= -eps || t.real() <= -0.5 + eps))) {
            r.tau_reduced = t;
            r.matrix = M;
            return r;
        }
        t = -1.0 / t;
        M = S * M;
        r.word.push_back("S");
    }
    throw error(errc::no_convergence, "tau reduction did not terminate");
}

cplx g2_of(cplx lam) { return 4.0 / 3.0 * (lam * lam - lam + 1.0); }
cplx g3_of(cplx lam) { return 4.0 / 27.0 * (lam - 2.0) * (lam + 1.0) * (2.0 * lam - 1.0); }

cplx j_invariant(cplx lam)
{
    check_lambda(lam);
    cplx a = lam * lam - lam + 1.0;
    cplx b = lam * (lam - 1.0);
    return 256.0 * a * a * a / (b * b);
}

cplx eta_product24(cplx q)
{
    if (!(std::abs(q) < 1.0))
        throw error(errc::not_upper_half_plane, "|q| must be below 1");
    cplx prod = 1.0, qn = q;
    for (int n = 1; n < 100000; ++n) {
        prod *= std::pow(1.0 - qn, 24);
        if (std::abs(qn) < 1e-17)
            return prod;
        qn *= q;
    }
    throw error(errc::no_convergence, "eta product did not converge");
}

cplx discriminant_delta(cplx tau)
{
    cplx q = std::exp(cplx(0.0, 2.0 * pi) * tau);
    return q * eta_product24(q);
}

cplx j_from_tau(cplx tau)
{
    cplx q = std::exp(cplx(0.0, 2.0 * pi) * tau);
    cplx e4 = 1.0, qn = q;
    for (int n = 1; n < 100000; ++n) {
        cplx term = 240.0 * double(n) * n * n * qn / (1.0 - qn);
        e4 += term;
        if (std::abs(term) < 1e-17 * std::abs(e4))
            break;
        qn *= q;
    }
    return e4 * e4 * e4 / discriminant_delta(tau);
}

ModularInvariants modular_invariants(const LegendreParam &lam, const PeriodData &periods)
{
    ModularInvariants mi;
    cplx l = lam.lambda;
    mi.g2 = g2_of(l);
    mi.g3 = g3_of(l);
    mi.D = 16.0 * l * l * (1.0 - l) * (1.0 - l);
    mi.j = j_invariant(l);
    cplx tau0 = periods.omega2 / periods.omega1;
    cplx w1 = periods.omega1;
    if (tau0.imag() < 0.0) {
        // orientation flip keeps the lattice and puts tau in the upper half plane
        tau0 = -tau0;
    }
    TauReduction red = reduce_tau_standard(tau0);
    mi.tau = red.tau_reduced;
    const Mat2 &M = red.matrix;
    mi.omega = w1 * (double(M.c) * tau0 + double(M.d));
    mi.q = std::exp(cplx(0.0, 2.0 * pi) * mi.tau);
    mi.delta = discriminant_delta(mi.tau);
    mi.area = 2.0 * std::norm(mi.omega) * mi.tau.imag();
    cplx rhs = std::pow(2.0 * pi / mi.omega, 12) * mi.delta;
    mi.disc_relation_residual = std::abs(mi.D - rhs) / std::abs(mi.D);
    return mi;
}

AreaCheck area_lower_bound_check(const LegendreParam &lam, const PeriodData &periods)
{
    AreaCheck c;
    c.lhs = periods.area;
    double m = std::max(1.0 / std::abs(lam.lambda), 1.0 / std::abs(1.0 - lam.lambda));
    c.rhs = std::max(4.0 / pi * (std::log(m) - std::log(11.0)), 2.0 * std::sqrt(3.0));
    c.ok = c.lhs >= c.rhs - 1e-6;
    return c;
}

} // namespace legendre
