#include "legendre/pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "legendre/errors.hpp"
#include "legendre/weierstrass.hpp"

namespace legendre {

std::string to_string(const PfaffianFormat &f)
{
    std::ostringstream os;
    os << '(' << f.r << ',' << f.alpha << ',' << f.beta << ',' << f.n << ',' << f.L << ',' << f.M << ')';
    return os.str();
}

const char *chain_name(ChainKind kind)
{
    switch (kind) {
    case ChainKind::macintyre_inverse: return "macintyre_inverse";
    case ChainKind::exponential: return "exponential";
    case ChainKind::zeta_extended: return "zeta_extended";
    case ChainKind::phi_extended: return "phi_extended";
    }
    return "?";
}

ChainSpec catalog_chain(ChainKind kind)
{
    switch (kind) {
    case ChainKind::macintyre_inverse:
        // u, v, Re s/|g|, Im s/|g|, 1/|g|, x-coordinate helpers on one region V_j
        return {chain_name(kind), kind, 7, 9, 1, "V_j, j = 1..10"};
    case ChainKind::exponential:
        // exp(x), tan(y/3), cos(y/3); Re/Im exp(x + iy) have degree 6 in the chain
        return {chain_name(kind), kind, 3, 2, 6, "R x [-pi, pi)"};
    case ChainKind::zeta_extended:
        // adds Re, Im of the second-kind integral
        return {chain_name(kind), kind, 9, 9, 1, "V_j, j = 1..10"};
    case ChainKind::phi_extended:
        // adds Re, Im of L_{V_j}
        return {chain_name(kind), kind, 11, 9, 1, "V_j, j = 1..10"};
    }
    throw error(errc::invalid_argument, "unknown chain");
}

FormatBuilder &FormatBuilder::chain(ChainKind kind)
{
    ChainSpec c = catalog_chain(kind);
    r_ += c.order;
    alpha_ = std::max(alpha_, c.alpha);
    return *this;
}

FormatBuilder &FormatBuilder::variables(long long k)
{
    n_ += k;
    return *this;
}

FormatBuilder &FormatBuilder::equations(long long k, long long beta)
{
    M_ += k;
    beta_ = std::max(beta_, beta);
    return *this;
}

FormatBuilder &FormatBuilder::pieces(const bigint &L)
{
    L_ = L;
    return *this;
}

PfaffianFormat FormatBuilder::build() const
{
    if (r_ < 0 || alpha_ < 0 || beta_ < 0 || n_ < 0 || M_ < 0 || L_ < 0)
        throw error(errc::overflow_guard, "negative format entry");
    return {r_, alpha_, beta_, n_, L_, M_};
}

PfaffianFormat format_union(const std::vector<PfaffianFormat> &parts)
{
    PfaffianFormat u;
    u.L = 0;
    for (const auto &p : parts) {
        u.r = std::max(u.r, p.r);
        u.alpha = std::max(u.alpha, p.alpha);
        u.beta = std::max(u.beta, p.beta);
        u.n = std::max(u.n, p.n);
        u.M = std::max(u.M, p.M);
        u.L += p.L;
    }
    return u;
}

PfaffianFormat format_projection(const PfaffianFormat &f) { return f; }

const char *function_name(TheoremFunction w)
{
    switch (w) {
    case TheoremFunction::wp: return "wp";
    case TheoremFunction::zeta: return "zeta";
    case TheoremFunction::phi: return "phi";
    }
    return "?";
}

bigint theorem_piece_count(TheoremFunction w, const PieceCount &pc)
{
    bigint t = 2 * bigint(pc.betti_bound) + 1;
    bigint L = bigint(pc.regions) * pc.branches * t * t;
    if (w == TheoremFunction::phi)
        L *= (2 * bigint(pc.log_bound) + 1) * (2 * bigint(pc.psi_bound) + 1);
    return L;
}

PfaffianFormat compose_theorem_format(TheoremFunction w, const PieceCount &pc)
{
    bigint L = theorem_piece_count(w, pc) + pc.explicit_points;
    FormatBuilder b;
    switch (w) {
    case TheoremFunction::wp:
        // (x, y, f_wp, g_wp); two real equations for the inverse
        b.chain(ChainKind::macintyre_inverse).variables(4).equations(2, 1);
        break;
    case TheoremFunction::zeta:
        // adds (f_zeta, g_zeta) and two equations
        b.chain(ChainKind::zeta_extended).variables(6).equations(4, 1);
        break;
    case TheoremFunction::phi: {
        // (x, y, x_phi, y_phi, f_L, g_L, f_wp, g_wp, f_phi, g_phi); exp chains on
        // (x_phi, y_phi) and (f_L, g_L); the last pair of equations multiplies two exponentials
        long long exp_beta = catalog_chain(ChainKind::exponential).beta;
        b.chain(ChainKind::phi_extended)
            .chain(ChainKind::exponential)
            .chain(ChainKind::exponential)
            .variables(10)
            .equations(6, 1)
            .equations(2, exp_beta);
        break;
    }
    }
    return b.pieces(L).build();
}

bigint component_bound(long long r, long long alpha, long long beta, long long n)
{
    if (r < 0 || alpha < 0 || beta < 0 || n < 1)
        throw error(errc::invalid_argument, "component_bound: bad parameters");
    bigint v = bigint(1) << (r * (r - 1) / 2);
    v *= beta;
    v *= boost::multiprecision::pow(bigint(alpha + 2 * beta - 1), unsigned(n - 1));
    long long last = (2 * n - 1) * (alpha + beta) - 2 * n + 2;
    v *= boost::multiprecision::pow(bigint(last), unsigned(r));
    return v;
}

ZeroBound khovanskii_zero_bound(const PfaffianFormat &f, long long T)
{
    if (T < 0)
        throw error(errc::invalid_argument, "negative degree");
    ZeroBound z;
    z.T = T;
    z.effective_beta = T + f.beta + 1;
    z.degree_too_small = T < 20;
    z.value = component_bound(f.r, f.alpha, z.effective_beta, f.n);
    return z;
}

bigint corollary_anchor(long long T)
{
    // 7.5373e14 = 75373 * 10^10
    bigint t = boost::multiprecision::pow(bigint(T), 11);
    return bigint(75373) * boost::multiprecision::pow(bigint(10), 10) * t;
}

namespace {

struct Polyline {
    std::vector<cplx> w;
    std::vector<double> r;
    std::vector<char> cut; // cut[i]: no segment between i and i+1
};

Polyline trace(const Lattice &lat, cplx dir, int grid, double clip, double h)
{
    Polyline p;
    const double dr0 = 1.0 / grid;
    long long budget = 200LL * grid + 2000000;
    bool prev_ok = false;
    for (double r = 0.5 * dr0; r < 1.0;) {
        cplx z = r * dir;
        cplx w = lat.wp(z);
        double step = dr0;
        bool ok = std::abs(w) <= clip;
        if (ok) {
            if (prev_ok)
                p.cut.back() = 0;
            p.w.push_back(w);
            p.r.push_back(r);
            p.cut.push_back(1);
            step = std::min(dr0, h / std::max(std::abs(dir * lat.wp_prime(z)), 1e-300));
        }
        prev_ok = ok;
        r += step;
        if (--budget < 0)
            throw error(errc::tracing_budget_exceeded, "curve tracing exceeded its point budget");
    }
    return p;
}

bool seg_intersect(cplx a, cplx b, cplx c, cplx d, double &t, double &u)
{
    cplx e = b - a, f = d - c, g = c - a;
    double den = e.real() * f.imag() - e.imag() * f.real();
    if (std::abs(den) < 1e-300)
        return false;
    t = (g.real() * f.imag() - g.imag() * f.real()) / den;
    u = (g.real() * e.imag() - g.imag() * e.real()) / den;
    const double s = 1e-9;
    return t >= -s && t <= 1 + s && u >= -s && u <= 1 + s;
}

} // namespace

DomainChangeResult domain_change_growth(cplx lam, long long a, long long b, long long c, long long d, int grid)
{
    if (a * d - b * c != 1)
        throw error(errc::invalid_argument, "domain_change_growth: matrix is not unimodular");
    if (a == 1 && b == 0 && c == 0 && d == 1)
        throw error(errc::invalid_argument, "domain_change_growth: identity is out of scope");
    long long n = std::max({std::llabs(a), std::llabs(b), std::llabs(c), std::llabs(d)});
    if (n > 15 || grid < 100 || grid > 1000000)
        throw error(errc::tracing_budget_exceeded, "domain_change_growth: n <= 15 and 100 <= grid <= 1e6");

    PeriodData pd = compute_periods(lam);
    Lattice lat(pd);
    const cplx w1 = pd.omega1, w2 = pd.omega2;
    // second curve along the row holding the largest entry
    bool first_row = std::max(std::llabs(a), std::llabs(b)) == n;
    long long p = first_row ? a : c, q = first_row ? b : d;
    if (p == 0 && std::llabs(q) == 1)
        throw error(errc::invalid_argument, "domain_change_growth: curves coincide");
    cplx v = double(p) * w1 + double(q) * w2;

    double scale = 1.0;
    for (cplx e : {cplx(1.0 / 3.0) * (2.0 - lam), (2.0 * lam - 1.0) / 3.0, -(lam + 1.0) / 3.0})
        scale = std::max(scale, std::abs(e));
    double clip = 1e3 * scale, h = scale / 200.0;

    Polyline C = trace(lat, w2, grid, clip, h);
    Polyline Cn = trace(lat, v, grid * int(std::max(std::llabs(p), std::llabs(q))), clip, h);

    // bucket the segments of C on cells of size h
    auto key = [](long long ix, long long iy) { return (ix << 32) ^ (iy & 0xffffffffLL); };
    std::unordered_map<long long, std::vector<int>> cells;
    for (int i = 0; i + 1 < int(C.w.size()); ++i) {
        if (C.cut[i])
            continue;
        cplx lo(std::min(C.w[i].real(), C.w[i + 1].real()), std::min(C.w[i].imag(), C.w[i + 1].imag()));
        cplx hi(std::max(C.w[i].real(), C.w[i + 1].real()), std::max(C.w[i].imag(), C.w[i + 1].imag()));
        for (long long ix = std::floor(lo.real() / h); ix <= std::floor(hi.real() / h); ++ix)
            for (long long iy = std::floor(lo.imag() / h); iy <= std::floor(hi.imag() / h); ++iy)
                cells[key(ix, iy)].push_back(i);
    }

    DomainChangeResult res;
    res.n = n;
    for (int j = 0; j + 1 < int(Cn.w.size()); ++j) {
        if (Cn.cut[j])
            continue;
        cplx A = Cn.w[j], B = Cn.w[j + 1];
        std::vector<int> cand;
        for (long long ix = std::floor(std::min(A.real(), B.real()) / h); ix <= std::floor(std::max(A.real(), B.real()) / h); ++ix)
            for (long long iy = std::floor(std::min(A.imag(), B.imag()) / h); iy <= std::floor(std::max(A.imag(), B.imag()) / h); ++iy) {
                auto it = cells.find(key(ix, iy));
                if (it != cells.end())
                    cand.insert(cand.end(), it->second.begin(), it->second.end());
            }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (int i : cand) {
            double t, u;
            if (!seg_intersect(C.w[i], C.w[i + 1], A, B, t, u))
                continue;
            // Newton on wp(r w2) = wp(s v) in the real unknowns (r, s)
            double r = C.r[i] + t * (C.r[i + 1] - C.r[i]);
            double s = Cn.r[j] + u * (Cn.r[j + 1] - Cn.r[j]);
            double resid = 1e300;
            for (int it = 0; it < 40; ++it) {
                cplx F = lat.wp(r * w2) - lat.wp(s * v);
                resid = std::abs(F);
                if (resid < 1e-13 * scale)
                    break;
                cplx Jr = w2 * lat.wp_prime(r * w2), Js = -v * lat.wp_prime(s * v);
                double det = Jr.real() * Js.imag() - Jr.imag() * Js.real();
                if (std::abs(det) < 1e-300)
                    break;
                double dr = (F.real() * Js.imag() - F.imag() * Js.real()) / det;
                double ds = (Jr.real() * F.imag() - Jr.imag() * F.real()) / det;
                r -= dr;
                s -= ds;
                if (!(r > 0 && r < 1 && s > 0 && s < 1))
                    break;
            }
            if (!(r > 0 && r < 1 && s > 0 && s < 1) || resid > 1e-9 * scale)
                continue;
            cplx w = lat.wp(r * w2);
            bool dup = false;
            for (cplx x : res.points)
                if (std::abs(x - w) < 1e-7 * scale)
                    dup = true;
            if (dup)
                continue;
            res.points.push_back(w);
            res.r_on_c.push_back(r);
            res.r_on_cn.push_back(s);
            res.max_residual = std::max(res.max_residual, resid);
        }
    }
    res.count = (long long)res.points.size();
    return res;
}

} // namespace legendre
