#include "legendre/abel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace legendre {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I1(0.0, 1.0);

double seg_point_dist(cplx p, cplx a, cplx b)
{
    cplx d = b - a;
    double n = std::norm(d);
    if (n == 0.0)
        return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(d)).real() / n, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double seg_seg_dist(cplx a, cplx b, cplx c, cplx d)
{
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return 0.0;
    return std::min({seg_point_dist(a, c, d), seg_point_dist(b, c, d), seg_point_dist(c, a, b),
                     seg_point_dist(d, a, b)});
}

// distance from segment a-b to the ray (-inf, 0]
double seg_negray_dist(cplx a, cplx b)
{
    auto pd = [](cplx p) { return p.real() <= 0.0 ? std::abs(p.imag()) : std::abs(p); };
    double best = std::min({pd(a), pd(b), seg_point_dist(0.0, a, b)});
    double ya = a.imag(), yb = b.imag();
    if ((ya <= 0.0 && yb >= 0.0) || (ya >= 0.0 && yb <= 0.0)) {
        double x;
        if (ya == yb)
            x = std::min(a.real(), b.real());
        else
            x = a.real() + (b.real() - a.real()) * (ya / (ya - yb));
        if (x <= 0.0)
            return 0.0;
    }
    return best;
}


double log_uniform(std::mt19937_64 &g, double a, double b)
{
    std::uniform_real_distribution<double> u(std::log(a), std::log(b));
    return std::exp(u(g));
}

double uniform(std::mt19937_64 &g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

// Gauss-Legendre panel data: nodes, weights and the cumulative integration matrix.
struct GaussPanel {
    static constexpr int N = 20;
    std::array<double, N> t{}, w{};
    std::array<std::array<double, N>, N> S{};
    GaussPanel()
    {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto &ab = G::abscissa();
        const auto &wt = G::weights();
        int h = N / 2;
        for (int k = 0; k < h; ++k) {
            t[h - 1 - k] = -ab[k];
            w[h - 1 - k] = wt[k];
            t[h + k] = ab[k];
            w[h + k] = wt[k];
        }
        auto lagrange = [&](int j, double x) {
            double v = 1.0;
            for (int m = 0; m < N; ++m)
                if (m != j)
                    v *= (x - t[m]) / (t[j] - t[m]);
            return v;
        };
        for (int i = 0; i < N; ++i) {
            double half = 0.5 * (t[i] + 1.0);
            for (int j = 0; j < N; ++j) {
                double acc = 0.0;
                for (int k = 0; k < N; ++k)
                    acc += w[k] * lagrange(j, -1.0 + half * (1.0 + t[k]));
                S[i][j] = half * acc;
            }
        }
    }
};

const GaussPanel &gauss_panel()
{
    static const GaussPanel gp;
    return gp;
}

struct Walk {
    cplx I{}, J{}, K{}, Q{}, P{}, KR{};
    cplx s_end{};
};

// Nested integrals along the polyline v; the kernel root is known at v[ref].
// v.front() and v.back() may be branch points, interior vertices may not.
Walk walk(cplx lam, const std::vector<cplx> &v, size_t ref, cplx s_ref, double guard)
{
    SqrtKernel K(legendre_branch_points(lam), guard);
    const auto &e = K.branch_points();
    const cplx c = (lam + 1.0) / 3.0;
    size_t n = v.size();
    std::vector<SheetState> st(n);
    st[ref] = K.seed(v[ref], s_ref);
    for (size_t i = ref + 1; i < n; ++i)
        st[i] = K.carry(v[i - 1], st[i - 1], v[i]);
    for (size_t i = ref; i-- > 0;)
        st[i] = K.carry(v[i + 1], st[i + 1], v[i]);
    auto is_bp = [&](cplx X) { return X == e[0] || X == e[1] || X == e[2]; };

    // q = eps sqrt(X) sqrt(X - lambda), normalised to sqrt(1 - lambda) at X = 1
    double eps = 1.0;
    if (v.front() == 1.0) {
        cplx q1 = st[0].r[0] * st[0].r[2];
        eps = (std::abs(q1 - std::sqrt(1.0 - lam)) < std::abs(q1 + std::sqrt(1.0 - lam))) ? 1.0 : -1.0;
    }

    const GaussPanel &gp = gauss_panel();
    Walk w;
    auto panel = [&](cplx p, cplx q, cplx R, const SheetState &stR) {
        bool sp = is_bp(p), sq = is_bp(q);
        std::array<cplx, GaussPanel::N> f1, f2, fq, fp;
        for (int j = 0; j < GaussPanel::N; ++j) {
            double tau = 0.5 * (gp.t[j] + 1.0);
            cplx X, dX;
            std::array<cplx, 3> d;
            if (sp) {
                X = p + (q - p) * (tau * tau);
                dX = (q - p) * tau;
            } else if (sq) {
                X = q - (q - p) * ((1.0 - tau) * (1.0 - tau));
                dX = (q - p) * (1.0 - tau);
            } else {
                X = p + (q - p) * tau;
                dX = 0.5 * (q - p);
            }
            for (int k = 0; k < 3; ++k) {
                if (sp && e[k] == p)
                    d[k] = (q - p) * (tau * tau);
                else if (sq && e[k] == q)
                    d[k] = -(q - p) * ((1.0 - tau) * (1.0 - tau));
                else
                    d[k] = X - e[k];
            }
            std::array<cplx, 3> r;
            for (int k = 0; k < 3; ++k)
                r[k] = stR.r[k] * std::sqrt(d[k] / (R - e[k]));
            cplx s = stR.sign * r[0] * r[1] * r[2];
            cplx qq = eps * r[0] * r[2];
            f1[j] = dX / (2.0 * s);
            f2[j] = (X - c) * f1[j];
            fq[j] = dX / (2.0 * qq);
            fp[j] = qq * f1[j];
        }
        cplx dI = 0, dJ = 0, dQ = 0, dP = 0, dK = 0, dKR = 0;
        for (int i = 0; i < GaussPanel::N; ++i) {
            cplx Ii = w.I, Ji = w.J, Pi = w.P;
            for (int j = 0; j < GaussPanel::N; ++j) {
                Ii += gp.S[i][j] * f1[j];
                Ji += gp.S[i][j] * f2[j];
                Pi += gp.S[i][j] * fp[j];
            }
            dI += gp.w[i] * f1[i];
            dJ += gp.w[i] * f2[i];
            dQ += gp.w[i] * fq[i];
            dP += gp.w[i] * fp[i];
            dK += gp.w[i] * Ji * f1[i];
            dKR += gp.w[i] * (Ji + Ii / 3.0 - Pi) * f1[i];
        }
        w.I += dI;
        w.J += dJ;
        w.Q += dQ;
        w.P += dP;
        w.K += dK;
        w.KR += dKR;
    };

    // split p-q until every branch point other than a singular end is at least one panel length away
    std::vector<std::pair<cplx, cplx>> panels;
    auto split = [&](auto &&self, cplx p, cplx q, int depth) -> void {
        double len = std::abs(q - p);
        double dmin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            if (e[k] == p || e[k] == q)
                continue;
            dmin = std::min(dmin, seg_point_dist(e[k], p, q));
        }
        if (dmin >= len || depth > 200) {
            if (depth > 200)
                throw error(errc::tolerance_not_met, "panel refinement exhausted");
            panels.emplace_back(p, q);
            return;
        }
        // grade towards the closest branch point
        int kc = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            if (e[k] == p || e[k] == q)
                continue;
            double dk = seg_point_dist(e[k], p, q);
            if (dk < best) {
                best = dk;
                kc = k;
            }
        }
        cplx d = q - p;
        double tproj = std::clamp(((e[kc] - p) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
        double tm = 0.5;
        if (tproj < 0.25)
            tm = std::max(tproj + 0.5 * best / len, 1e-3);
        else if (tproj > 0.75)
            tm = std::min(tproj - 0.5 * best / len, 1.0 - 1e-3);
        tm = std::clamp(tm, 1e-3, 1.0 - 1e-3);
        cplx m = p + d * tm;
        self(self, p, m, depth + 1);
        self(self, m, q, depth + 1);
    };

    for (size_t i = 0; i + 1 < n; ++i) {
        cplx a = v[i], b = v[i + 1];
        if (a == b)
            continue;
        if (K.clearance(a, b) < guard)
            throw error(errc::path_hits_branch_point, "route passes through a branch point");
        panels.clear();
        split(split, a, b, 0);
        // reference state: the regular end of the segment
        bool a_reg = !is_bp(a);
        cplx R = a_reg ? a : b;
        SheetState stR = a_reg ? st[i] : st[i + 1];
        for (auto [p, q] : panels) {
            if (is_bp(p)) {
                SheetState sq_ = K.carry(R, stR, q);
                panel(p, q, q, sq_);
            } else {
                SheetState sp_ = K.carry(R, stR, p);
                panel(p, q, p, sp_);
            }
        }
    }
    w.s_end = is_bp(v.back()) ? cplx(0.0) : K.root(v.back(), st.back());
    return w;
}

// adaptive real integral of g over [a, b] with tanh-sinh pieces
double real_integral(const std::function<double(double)> &g, double a, double b, double tol, int depth = 0)
{
    auto h = [&](double u, double v) -> cplx {
        double x = u < 0.5 ? a + (b - a) * u : b - (b - a) * v;
        return g(x) * (b - a);
    };
    QuadratureResult r = tanh_sinh_unit(h, tol, 9);
    if (std::isfinite(r.abs_error_estimate) || depth > 30)
        return r.value.real();
    double m = 0.5 * (a + b);
    return real_integral(g, a, m, 0.5 * tol, depth + 1) + real_integral(g, m, b, 0.5 * tol, depth + 1);
}

} // namespace

int region_index(Region r) { return static_cast<int>(r); }

bool is_slit(Region r) { return r == Region::V7 || r == Region::V8 || r == Region::V9; }

const char *region_name(Region r)
{
    static const char *names[] = {"V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9", "V10"};
    return names[region_index(r) - 1];
}

const char *side_name(Side s)
{
    switch (s) {
    case Side::north:
        return "north";
    case Side::south:
        return "south";
    default:
        return "interior";
    }
}

Region classify_region(cplx lam, cplx xi)
{
    if (lam.imag() < 0.0)
        return classify_region(std::conj(lam), std::conj(xi));
    const double eps = 1e-14 * (1.0 + std::abs(xi));
    double y = xi.imag(), x = xi.real();
    if (std::abs(y) <= eps) {
        if (x <= 0.0)
            return Region::V7;
        if (x >= 1.0)
            return Region::V9;
        if (lam.imag() == 0.0 && x <= lam.real())
            return Region::V8;
        return Region::V10;
    }
    if (y < 0.0)
        return Region::V4;
    double b = lam.imag();
    if (b == 0.0)
        return Region::V1;
    if (std::abs(y - b) <= eps * (1.0 + b)) {
        if (std::abs(x - lam.real()) <= eps)
            return Region::V8;
        return x < lam.real() ? Region::V5 : Region::V6;
    }
    if (y > b)
        return Region::V1;
    // 0 < y < b: compare with the point of L_lambda at height y
    double xl = lam.real() * (y / b);
    if (std::abs(x - xl) <= eps)
        return Region::V8;
    return x < xl ? Region::V2 : Region::V3;
}

SlitPlanePoint make_point(cplx lam, cplx xi, Side side)
{
    SlitPlanePoint p;
    p.xi = xi;
    p.region = classify_region(lam, xi);
    p.side = is_slit(p.region) ? side : Side::interior;
    return p;
}

cplx side_normal(cplx lam, Region slit, Side side)
{
    cplx n;
    if (slit == Region::V8)
        n = I1 * lam / std::abs(lam);
    else
        n = I1;
    return side == Side::south ? -n : n;
}

int branch_point_index(cplx lam, cplx xi, double radius)
{
    auto e = legendre_branch_points(lam);
    for (int k = 0; k < 3; ++k)
        if (std::abs(xi - e[k]) <= radius)
            return k;
    return -1;
}

AbelMap::AbelMap(cplx lam, double tol) : AbelMap(lam, compute_periods(lam), tol) {}

AbelMap::AbelMap(cplx lam, const PeriodData &pd, double tol) : lam_(lam), pd_(pd), lat_(pd), tol_(tol)
{
    if (lam == 0.0 || lam == 1.0 || (lam.imag() == 0.0 && lam.real() > 1.0) || (lam.imag() == 0.0 && lam.real() < 0.0))
        throw error(errc::invalid_lambda, "lambda must lie off the slits");
    build();
}

bool AbelMap::visible(cplx a, cplx b) const
{
    double eps = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
    if (seg_negray_dist(a, b) <= eps)
        return false;
    if (seg_negray_dist(1.0 - a, 1.0 - b) <= eps)
        return false;
    if (seg_seg_dist(a, b, 0.0, lam_) <= eps)
        return false;
    // near a branch point only an endpoint may come closer than the guard
    for (cplx e : legendre_branch_points(lam_)) {
        double g = std::min({1e-8, 0.5 * std::abs(a - e), 0.5 * std::abs(b - e)});
        if (seg_point_dist(e, a, b) < g)
            return false;
    }
    return true;
}

void AbelMap::build()
{
    const double al = std::abs(lam_);
    std::vector<cplx> pts;
    pts.push_back(-1.0);
    pts.push_back(cplx(-1.0, -0.5));
    cplx xc = 0.5 * (1.0 + lam_.real());
    center_ = static_cast<int>(pts.size());
    pts.push_back(xc);
    pts.push_back(xc + 0.5 * I1);
    pts.push_back(xc - 0.5 * I1);
    for (int k = 0; k < 8; ++k)
        pts.push_back(lam_ + 0.3 * al * std::polar(1.0, k * pi / 4.0));
    const double angles[] = {pi / 2, -pi / 2, pi / 4, -pi / 4, 3 * pi / 4, -3 * pi / 4};
    for (double r = 0.5 * al; r < 3e4; r *= 2.0)
        for (double th : angles)
            pts.push_back(std::polar(r, th));
    double d1 = std::min(1.0, std::abs(1.0 - lam_));
    for (double f : {0.1, 0.25, 0.45})
        for (double th : angles)
            pts.push_back(1.0 + std::polar(f * d1, th));

    // keep regular points off the slits
    std::vector<cplx> keep;
    for (size_t i = 0; i < pts.size(); ++i) {
        cplx X = pts[i];
        if (i == 0) {
            keep.push_back(X);
            continue;
        }
        if (i == size_t(center_))
            center_ = static_cast<int>(keep.size());
        bool bad = false;
        for (cplx e : legendre_branch_points(lam_))
            if (std::abs(X - e) < 1e-3 * al)
                bad = true;
        double eps = 1e-10 * (1.0 + std::abs(X));
        if (seg_negray_dist(X, X) <= eps || seg_negray_dist(1.0 - X, 1.0 - X) <= eps ||
            seg_point_dist(X, 0.0, lam_) <= eps)
            bad = true;
        if (!bad)
            keep.push_back(X);
    }
    size_t n = keep.size();
    // Dijkstra from S' (index 1); the base point -1 hangs below it
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n, -1);
    std::vector<char> done(n, 0);
    dist[1] = 0.0;
    for (size_t it = 0; it < n; ++it) {
        int u = -1;
        for (size_t i = 1; i < n; ++i)
            if (!done[i] && (u < 0 || dist[i] < dist[u]))
                u = int(i);
        if (u < 0 || !std::isfinite(dist[u]))
            break;
        done[u] = 1;
        for (size_t v = 1; v < n; ++v) {
            if (done[v])
                continue;
            double dv = dist[u] + std::abs(keep[v] - keep[u]);
            if (dv < dist[v] && visible(keep[u], keep[v])) {
                dist[v] = dv;
                parent[v] = u;
            }
        }
    }
    if (!std::isfinite(dist[center_]))
        throw error(errc::search_failed, "routing graph does not reach the centre waypoint");

    SqrtKernel K(legendre_branch_points(lam_));
    const cplx c = (lam_ + 1.0) / 3.0;
    Integrand f_z = [](const KernelPoint &kp) { return 0.5 / kp.s; };
    Integrand f_zeta = [c](const KernelPoint &kp) { return 0.5 * (kp.X - c) / kp.s; };

    // base point -1: z = int_{-1}^{-inf} dX/(2s), zeta = eta2/2 + int_0^{-1} (X - c) dX/(2s)
    Node P;
    P.X = -1.0;
    P.s = kernel_root_negative_axis(-1.0, lam_);
    SheetState stP = K.seed(P.X, P.s);
    P.z = K.ray(P.X, -1.0, stP, f_z, tol_).value;
    P.zeta = 0.5 * pd_.eta2 - K.segment(P.X, 0.0, stP, f_zeta, tol_).value;
    std::vector<Node> nodes(n);
    nodes[0] = P;
    std::vector<int> order;
    for (size_t i = 1; i < n; ++i)
        if (std::isfinite(dist[i]))
            order.push_back(int(i));
    std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    parent[1] = 0;
    std::vector<int> remap(n, -1);
    remap[0] = 0;
    nodes_.clear();
    nodes_.push_back(P);
    for (int i : order) {
        int pi_ = parent[i];
        const Node &from = nodes_[remap[pi_]];
        SheetState st = K.seed(from.X, from.s);
        Node nd;
        nd.X = keep[i];
        nd.z = from.z - K.segment(from.X, nd.X, st, f_z, tol_).value;
        nd.zeta = from.zeta + K.segment(from.X, nd.X, st, f_zeta, tol_).value;
        nd.s = K.root(nd.X, K.carry(from.X, st, nd.X));
        nd.parent = remap[pi_];
        remap[i] = int(nodes_.size());
        nodes_.push_back(nd);
    }
    center_ = remap[center_];
}

int AbelMap::pick_node(cplx X) const
{
    std::vector<std::pair<double, int>> cand;
    for (size_t i = 1; i < nodes_.size(); ++i)
        cand.emplace_back(std::abs(nodes_[i].X - X), int(i));
    std::sort(cand.begin(), cand.end());
    for (auto [d, i] : cand)
        if (visible(nodes_[i].X, X))
            return i;
    return -1;
}

std::vector<cplx> AbelMap::approach(const SlitPlanePoint &p, int &node, bool &to_branch) const
{
    const cplx xi = p.xi;
    auto e = legendre_branch_points(lam_);
    to_branch = false;
    std::vector<cplx> tail;
    cplx target_regular;
    int bk = -1;
    for (int k = 0; k < 3; ++k)
        if (xi == e[k])
            bk = k;
    if (bk < 0) {
        int near = branch_point_index(lam_, xi, 1e-14 * (1.0 + std::abs(xi)));
        if (near >= 0)
            throw error(errc::path_hits_branch_point, "target coincides with a branch point up to rounding");
    }
    double dnear = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k)
        if (k != bk)
            dnear = std::min(dnear, std::abs(xi - e[k]));
    if (bk >= 0) {
        double dl = std::min({std::abs(lam_), std::abs(1.0 - lam_), 1.0});
        double delta = 0.1 * dl;
        cplx dir;
        if (bk == 0)
            dir = std::polar(1.0, 0.5 * (-pi + std::arg(lam_)));
        else if (bk == 1)
            dir = -1.0;
        else
            dir = lam_ / std::abs(lam_);
        target_regular = e[bk] + delta * dir;
        tail = {target_regular, xi};
        to_branch = true;
    } else if (is_slit(p.region)) {
        if (p.side == Side::interior)
            throw error(errc::on_slit_without_side, "point on a slit needs a side");
        double delta = std::min(0.25 * dnear, 0.05 * (1.0 + std::abs(xi)));
        target_regular = xi + delta * side_normal(lam_, p.region, p.side);
        tail = {target_regular, xi};
    } else {
        target_regular = xi;
        tail = {xi};
    }
    node = pick_node(target_regular);
    if (node < 0) {
        // one intermediate hop
        for (double f : {0.5, 0.25, 0.1, 0.02})
            for (int k = 0; k < 16 && node < 0; ++k) {
                cplx w = target_regular + f * dnear * std::polar(1.0, k * pi / 8.0);
                if (!visible(w, target_regular))
                    continue;
                int nd = pick_node(w);
                if (nd >= 0) {
                    node = nd;
                    tail.insert(tail.begin(), w);
                }
            }
        if (node < 0)
            throw error(errc::search_failed, "no admissible route to the target");
    }
    return tail;
}

std::vector<int> AbelMap::tree_path(int node) const
{
    std::vector<int> path;
    for (int i = node; i >= 0; i = nodes_[i].parent)
        path.push_back(i);
    std::reverse(path.begin(), path.end());
    return path;
}

AbelValue AbelMap::eval(const SlitPlanePoint &p) const
{
    int node;
    bool to_branch;
    std::vector<cplx> tail = approach(p, node, to_branch);
    SqrtKernel K(legendre_branch_points(lam_), 1e-15);
    const cplx c = (lam_ + 1.0) / 3.0;
    Integrand f_z = [](const KernelPoint &kp) { return 0.5 / kp.s; };
    Integrand f_zeta = [c](const KernelPoint &kp) { return 0.5 * (kp.X - c) / kp.s; };
    const Node &nd = nodes_[node];
    AbelValue v{nd.z, nd.zeta, nd.s};
    cplx X = nd.X;
    SheetState st = K.seed(X, nd.s);
    for (size_t i = 0; i < tail.size(); ++i) {
        cplx Y = tail[i];
        v.z -= K.segment(X, Y, st, f_z, tol_).value;
        v.zeta += K.segment(X, Y, st, f_zeta, tol_).value;
        if (to_branch && i + 1 == tail.size()) {
            v.s = 0.0;
            break;
        }
        st = K.carry(X, st, Y);
        X = Y;
        v.s = K.root(X, st);
    }
    return v;
}

AbelMap::Route AbelMap::route_from_center(const SlitPlanePoint &p) const
{
    int node;
    bool to_branch;
    std::vector<cplx> tail = approach(p, node, to_branch);
    std::vector<int> a = tree_path(center_), b = tree_path(node);
    size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common])
        ++common;
    Route r;
    for (size_t i = a.size(); i-- > common - 1;)
        r.vertices.push_back(nodes_[a[i]].X);
    for (size_t i = common; i < b.size(); ++i)
        r.vertices.push_back(nodes_[b[i]].X);
    for (cplx t : tail)
        if (t != r.vertices.back())
            r.vertices.push_back(t);
    r.s_start = nodes_[center_].s;
    r.end_is_branch_point = to_branch;
    return r;
}

cplx abel_z(cplx lam, const SlitPlanePoint &xi, double tol) { return AbelMap(lam, tol).z(xi); }

BettiCoords betti(const AbelMap &map, const SlitPlanePoint &xi)
{
    return betti_of(map.z(xi), map.periods().omega1, map.periods().omega2);
}

NorthSouthSample north_south(const AbelMap &map, cplx xi)
{
    cplx lam = map.lambda();
    const PeriodData &pd = map.periods();
    NorthSouthSample s;
    s.xi = xi;
    s.region = classify_region(lam, xi);
    if (!is_slit(s.region))
        throw error(errc::invalid_argument, "north/south limits are taken on a slit");
    SlitPlanePoint p = make_point(lam, xi, Side::north);
    s.z_north = map.z(p);
    p.side = Side::south;
    s.z_south = map.z(p);
    cplx rel, target;
    if (s.region == Region::V7) {
        rel = s.z_north - s.z_south;
        target = pd.omega1;
    } else {
        rel = s.z_north + s.z_south;
        target = s.region == Region::V8 ? pd.omega1 + pd.omega2 : pd.omega1;
    }
    s.relation_residual = std::min(std::abs(rel - target), std::abs(rel + target)) / std::abs(pd.omega1);
    BettiCoords bn = betti_of(s.z_north, pd.omega1, pd.omega2), bs = betti_of(s.z_south, pd.omega1, pd.omega2);
    s.betti_gap = std::max(std::abs(std::abs(bn.b1) - std::abs(bs.b1)), std::abs(std::abs(bn.b2) - std::abs(bs.b2)));
    s.ok = s.relation_residual <= 1e-8 && s.betti_gap <= 1.0 + 1e-9;
    return s;
}

double numerator_bound(Boundary b, cplx lam)
{
    double L = std::log(1.0 / std::abs(lam));
    switch (b) {
    case Boundary::neg_axis:
        return 14.0 * L + 36.0;
    case Boundary::L_lambda:
        return 13.0 * L + 65.0;
    default:
        return 5.0 * L + 25.0;
    }
}

NumeratorReport numerator_bound_check(const AbelMap &map, Boundary boundary, int samples)
{
    cplx lam = map.lambda();
    NumeratorReport rep;
    rep.boundary = boundary;
    double bound = numerator_bound(boundary, lam);
    std::vector<cplx> xs;
    int m = std::max(samples, 2);
    for (int i = 0; i < m; ++i) {
        double u = double(i) / (m - 1);
        switch (boundary) {
        case Boundary::neg_axis:
            xs.push_back(i == 0 ? cplx(0.0) : cplx(-std::abs(lam) * 1e-3 * std::pow(1e7 / std::abs(lam), u)));
            break;
        case Boundary::L_lambda:
            xs.push_back(u * lam);
            break;
        case Boundary::one_infty:
            xs.push_back(i == 0 ? cplx(1.0) : cplx(1.0 + 1e-6 * std::pow(1e9, u)));
            break;
        }
    }
    for (cplx xi : xs) {
        SlitPlanePoint p = make_point(lam, xi, Side::south);
        if (xi == 0.0 || xi == 1.0 || xi == lam)
            p.side = Side::south;
        BettiCoords b = betti(map, p);
        NumeratorSample s;
        s.xi = xi;
        s.absB1 = std::abs(b.B1);
        s.absB2 = std::abs(b.B2);
        s.bound = bound;
        s.ok = s.absB1 <= bound && s.absB2 <= bound;
        rep.max_ratio = std::max(rep.max_ratio, std::max(s.absB1, s.absB2) / bound);
        rep.ok = rep.ok && s.ok;
        rep.samples.push_back(s);
    }
    return rep;
}

LogPhiTerms log_phi_terms(const AbelMap &map, const SlitPlanePoint &xi)
{
    const PeriodData &pd = map.periods();
    cplx lam = map.lambda();
    LogPhiTerms t;
    if (xi.xi == 1.0) {
        t.z = 0.5 * pd.omega1;
        return t;
    }
    AbelMap::Route r = map.route_from_center(xi);
    std::vector<cplx> v;
    v.push_back(1.0);
    for (cplx x : r.vertices)
        v.push_back(x);
    Walk w = walk(lam, v, 1, r.s_start, 1e-8);
    cplx w1 = pd.omega1;
    t.z = 0.5 * w1 - w.I;
    t.L = -pd.eta1 * w.I * w.I / (2.0 * w1) - w.K - pi * I1 * w.I / w1;
    t.int_q = w.Q;
    t.R = w.KR;
    t.R_phi = lam * (-2.0 / 3.0 + 2.0 * (1.0 - lam) * pd.omega1_prime / w1) * (0.5 * w.I * w.I);
    cplx ll1 = -t.int_q - t.R - t.R_phi + t.z * pi * I1 / w1 - 0.5 * pi * I1;
    t.LL1_residual = t.L - ll1;
    return t;
}

cplx log_phi_L(const AbelMap &map, const SlitPlanePoint &xi) { return log_phi_terms(map, xi).L; }

cplx log_phi_L(cplx lam, const SlitPlanePoint &xi, double tol) { return log_phi_L(AbelMap(lam, tol), xi); }

cplx log_phi_L_tilde(const AbelMap &map, const SlitPlanePoint &xi)
{
    cplx lam = map.lambda();
    const PeriodData &pd = map.periods();
    if (xi.xi == 0.0)
        return 0.0;
    if (is_slit(xi.region))
        throw error(errc::invalid_argument, "the disc continuation is defined for interior points");
    double a = std::arg(lam), th = std::arg(xi.xi), r = std::abs(xi.xi);
    bool upper = th > a; // sector between L_lambda and the negative axis, counter-clockwise
    double bis = upper ? 0.5 * (a + pi) : 0.5 * (a - pi);
    std::vector<cplx> v{0.0};
    cplx w1 = std::polar(r, bis);
    v.push_back(w1);
    const int steps = 32;
    for (int k = 1; k < steps; ++k) {
        cplx y = std::polar(r, bis + (th - bis) * k / steps);
        if (std::abs(y.imag()) < 1e-12 * r && y.real() >= 1.0)
            throw error(errc::invalid_argument, "target is not reachable from 0 inside the disc");
        v.push_back(y);
    }
    if (v.back() != xi.xi)
        v.push_back(xi.xi);
    cplx s1 = map.eval(make_point(lam, w1)).s;
    Walk w = walk(lam, v, 1, s1, 1e-8);
    return -w.K - pd.eta1 * w.I * w.I / (2.0 * pd.omega1);
}

double arc_integral_abs(cplx lam, cplx xi)
{
    double r = std::abs(xi), th = std::arg(xi);
    if (th == 0.0)
        return 0.0;
    auto g = [&](double u) {
        cplx X = std::polar(r, u);
        return r / (2.0 * std::sqrt(std::abs(X * (X - 1.0) * (X - lam))));
    };
    return real_integral(g, std::min(0.0, th), std::max(0.0, th), 1e-10);
}

double radial_integral_abs(cplx lam, cplx Xh)
{
    double R = std::abs(Xh);
    if (R == 0.0)
        return 0.0;
    auto g = [&](double t) {
        cplx X = Xh * t;
        return R / (2.0 * std::sqrt(std::abs(X * (X - 1.0) * (X - lam))));
    };
    std::vector<double> cuts{0.0, 1.0};
    for (cplx e : {lam, cplx(1.0)}) {
        double t = (e / Xh).real();
        if (t > 0.0 && t < 1.0)
            cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            acc += real_integral(g, cuts[i], cuts[i + 1], 1e-10);
    return acc;
}

RTermsReport R_terms_bound_check(const AbelMap &map, cplx xi)
{
    cplx lam = map.lambda();
    const PeriodData &pd = map.periods();
    RTermsReport rep;
    double ax = std::abs(xi), al = std::abs(lam);
    bool far = al <= 0.5 * ax;
    SlitPlanePoint p = make_point(lam, xi);
    if (is_slit(p.region))
        throw error(errc::on_slit_without_side, "bound checks take interior points");
    LogPhiTerms t = log_phi_terms(map, p);
    auto add = [&](const std::string &name, bool applicable, double value, double bound) {
        BoundCheck c{name, applicable, value, bound, !applicable || value <= bound};
        rep.ok = rep.ok && c.ok;
        rep.checks.push_back(c);
    };
    double rmax = std::max(std::abs(t.R), std::abs(t.R_phi));
    add("R_outer", far && ax >= 1.0, rmax, 132.0);
    add("R_inner", far && ax <= 1.0, rmax, 1100.0);
    add("Im_int_q", far, std::abs(t.int_q.imag()), 7.0);
    add("arc", far, arc_integral_abs(lam, xi), pi / std::sqrt(al));
    add("radial", ax <= 2.0 * al, radial_integral_abs(lam, xi), 12.0);
    add("omega1_prime_ratio", true, std::abs(-2.0 / 3.0 + 2.0 * (1.0 - lam) * pd.omega1_prime / pd.omega1), 11.0);
    if (ax <= 2.0 * al)
        add("L_tilde", true, std::abs(log_phi_L_tilde(map, p)), 2016.0);
    add("Im_L", true, std::abs(t.L.imag()), 2409.0);
    return rep;
}

WpGraphPoint reconstruct_wp_graph(const AbelMap &map, cplx z)
{
    cplx lam = map.lambda();
    const Lattice &lat = map.lattice();
    const PeriodData &pd = map.periods();
    WpGraphPoint g;
    g.value = lat.wp(z);
    g.xi = g.value + (lam + 1.0) / 3.0;
    cplx xi = g.xi;
    auto e = legendre_branch_points(lam);
    double scale = 1e-14 * (1.0 + std::abs(xi));
    int bk = branch_point_index(lam, xi, scale);
    if (bk >= 0) {
        xi = e[bk];
        g.explicit_point = true;
    }
    SlitPlanePoint p = make_point(lam, xi, Side::north);
    g.region = p.region;
    cplx zs = map.z(p);
    double best = std::numeric_limits<double>::infinity();
    for (int br : {1, -1}) {
        BettiCoords b = betti_of(double(br) * zs - z, pd.omega1, pd.omega2);
        long long m = std::llround(b.b1), n = std::llround(b.b2);
        double res = std::max(std::abs(b.b1 - double(m)), std::abs(b.b2 - double(n)));
        if (res < best) {
            best = res;
            g.branch = br;
            g.m = m;
            g.n = n;
        }
    }
    g.residual = best;
    if (!(best <= 1e-6))
        throw error(errc::search_failed, "no lattice translate matches the abelian integral");
    if (std::llabs(g.m) > 42 || std::llabs(g.n) > 42) {
        std::ostringstream os;
        os << "lattice translate (" << g.m << ", " << g.n << ") outside |m|,|n| <= 42";
        throw error(errc::search_failed, os.str());
    }
    return g;
}

cplx reconstruct_zeta_graph(const AbelMap &map, cplx z, WpGraphPoint *info)
{
    WpGraphPoint g = reconstruct_wp_graph(map, z);
    cplx xi = g.explicit_point ? legendre_branch_points(map.lambda())[branch_point_index(map.lambda(), g.xi, 1e-14 * (1.0 + std::abs(g.xi)))] : g.xi;
    SlitPlanePoint p = make_point(map.lambda(), xi, Side::north);
    cplx zeta_star = map.eval(p).zeta;
    if (info)
        *info = g;
    return double(g.branch) * zeta_star - map.lattice().eta_of(g.m, g.n);
}

std::string to_string(const MonodromyElement &g)
{
    std::ostringstream os;
    os << "(" << g.sign << ", (" << g.t1 << ", " << g.t2 << "))";
    return os.str();
}

std::vector<int> parse_word(const std::string &word)
{
    std::vector<int> out;
    size_t i = 0;
    while (i < word.size()) {
        char ch = word[i];
        if (ch == ' ' || ch == '*' || ch == ',' || ch == '.') {
            ++i;
            continue;
        }
        if (ch != 'g' || i + 1 >= word.size() || word[i + 1] < '1' || word[i + 1] > '3')
            throw error(errc::invalid_argument, "word letters are g1, g2, g3 with optional ^-1");
        int letter = word[i + 1] - '0';
        i += 2;
        if (word.compare(i, 3, "^-1") == 0) {
            letter = -letter;
            i += 3;
        } else if (i < word.size() && word[i] == '\'') {
            letter = -letter;
            ++i;
        }
        out.push_back(letter);
    }
    return out;
}

MonodromyElement monodromy_generator(int i)
{
    switch (i) {
    case 1:
        return {-1, 0, 1};
    case 2:
        return {-1, 1, 0};
    case 3:
        return {-1, 1, 1};
    default:
        throw error(errc::invalid_argument, "generator index must be 1, 2 or 3");
    }
}

MonodromyElement monodromy_rho(const std::vector<int> &word)
{
    MonodromyElement g;
    for (int l : word) {
        MonodromyElement h = monodromy_generator(std::abs(l));
        g = g * (l < 0 ? h.inverse() : h);
    }
    return g;
}

ContourPath standard_loop(cplx lam, int puncture, int vertices)
{
    cplx centre;
    double radius, base;
    switch (puncture) {
    case 0:
        centre = 0.0;
        radius = 0.5 * std::min(std::abs(lam), 1.0);
        base = 0.5 * (-pi + std::arg(lam));
        break;
    case 1:
        centre = 1.0;
        radius = 0.5 * std::min(std::abs(1.0 - lam), 1.0);
        base = pi;
        break;
    case 2:
        centre = lam;
        radius = 0.5 * std::min({std::abs(lam), std::abs(1.0 - lam), 1.0});
        base = std::arg(lam);
        break;
    default:
        throw error(errc::invalid_argument, "puncture index must be 0, 1 or 2");
    }
    ContourPath p;
    for (int k = 0; k <= vertices; ++k)
        p.vertices.push_back(centre + std::polar(radius, base + 2.0 * pi * k / vertices));
    p.vertices.back() = p.vertices.front();
    return p;
}

std::array<int, 3> winding_numbers(const ContourPath &loop, cplx lam)
{
    std::array<int, 3> w{};
    auto e = legendre_branch_points(lam);
    const auto &v = loop.vertices;
    for (int k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (size_t i = 0; i + 1 < v.size(); ++i)
            acc += std::arg((v[i + 1] - e[k]) / (v[i] - e[k]));
        if (v.size() > 1 && v.back() != v.front())
            acc += std::arg((v.front() - e[k]) / (v.back() - e[k]));
        w[k] = int(std::lround(acc / (2.0 * pi)));
    }
    return w;
}

MonodromyNumeric monodromy_numeric(const AbelMap &map, const ContourPath &loop)
{
    cplx lam = map.lambda();
    const auto &v = loop.vertices;
    if (v.size() < 3)
        throw error(errc::invalid_argument, "loop needs at least three vertices");
    auto wn = winding_numbers(loop, lam);
    int nz = 0, which = -1;
    for (int k = 0; k < 3; ++k)
        if (wn[k] != 0) {
            ++nz;
            which = k;
        }
    if (nz != 1 || std::abs(wn[which]) != 1)
        throw error(errc::ambiguous_loop, "loop must wind exactly once around exactly one puncture");
    SlitPlanePoint base = make_point(lam, v.front());
    if (is_slit(base.region))
        throw error(errc::ambiguous_loop, "loop base point lies on a slit");
    AbelValue a = map.eval(base);
    SqrtKernel K(legendre_branch_points(lam));
    Integrand f_z = [](const KernelPoint &kp) { return 0.5 / kp.s; };
    SheetState st = K.seed(v.front(), a.s);
    cplx z = a.z;
    std::vector<cplx> pts = v;
    if (pts.back() != pts.front())
        pts.push_back(pts.front());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        z -= K.segment(pts[i], pts[i + 1], st, f_z, map.tol()).value;
        st = K.carry(pts[i], st, pts[i + 1]);
    }
    cplx s_end = K.root(pts.back(), st);
    const PeriodData &pd = map.periods();
    BettiCoords b0 = betti_of(a.z, pd.omega1, pd.omega2), b1 = betti_of(z, pd.omega1, pd.omega2);
    MonodromyNumeric out;
    out.puncture = which;
    out.b_start = {b0.b1, b0.b2};
    out.b_end = {b1.b1, b1.b2};
    int sign = std::abs(s_end - a.s) < std::abs(s_end + a.s) ? 1 : -1;
    double t1 = b1.b1 - sign * b0.b1, t2 = b1.b2 - sign * b0.b2;
    out.element = {sign, std::llround(t1), std::llround(t2)};
    out.residual = std::max(std::abs(t1 - double(out.element.t1)), std::abs(t2 - double(out.element.t2)));
    if (wn[which] < 0)
        out.element = out.element.inverse();
    return out;
}

ChainAuditReport chain_derivative_audit(const AbelMap &map, Region region, int samples, unsigned long long seed)
{
    cplx lam = map.lambda();
    ChainAuditReport rep;
    rep.region = region;
    SqrtKernel K(legendre_branch_points(lam));
    Integrand f_z = [](const KernelPoint &kp) { return 0.5 / kp.s; };
    for (int i = 0; i < samples; ++i) {
        SlitPlanePoint p = sample_region(lam, region, seed * 1000003ULL + i);
        AbelValue a = map.eval(p);
        cplx xi = p.xi;
        double d = std::numeric_limits<double>::infinity();
        for (cplx e : legendre_branch_points(lam))
            d = std::min(d, std::abs(xi - e));
        double h = 1e-4 * std::min(d, 1.0 + std::abs(xi));
        SheetState st = K.seed(xi, a.s);
        // F = u + i v = -2 z, continued locally (across the slit when needed)
        auto F = [&](cplx dx) { return -2.0 * (a.z - K.segment(xi, xi + dx, st, f_z, 1e-13).value); };
        cplx Fr = (F(h) - F(-h)) / (2.0 * h);
        cplx Fi = (F(cplx(0, h)) - F(cplx(0, -h))) / (2.0 * h);
        cplx g = xi * (xi - 1.0) * (xi - lam);
        double A = g.real(), B = g.imag(), ag = std::abs(g);
        double du_r = a.s.real() / ag, du_i = a.s.imag() / ag;
        double scale = 1.0 / std::sqrt(ag);
        double res = std::max({std::abs(Fr.real() - du_r), std::abs(Fi.real() - du_i), std::abs(Fi.imag() - du_r),
                               std::abs(Fr.imag() + du_i)}) /
                     scale;
        // f1..f5 and their algebraic relations
        double f1 = 1.0 / std::sqrt(A * A + B * B);
        // f4 f5 = |B|; take the larger root directly to avoid cancellation
        double f4, f5;
        if (A >= 0.0) {
            f4 = std::sqrt(ag + A);
            f5 = std::abs(B) / f4;
        } else {
            f5 = std::sqrt(ag - A);
            f4 = std::abs(B) / f5;
        }
        double alg = std::abs(f1 * ag - 1.0);
        if (f4 > 1e-6 * std::sqrt(ag)) {
            double f2 = 1.0 / f4;
            alg = std::max(alg, std::abs(f4 * f2 - 1.0));
        }
        alg = std::max(alg, std::abs(f4 * f4 - (1.0 / f1 + A)) / ag);
        alg = std::max(alg, std::abs(f5 * f5 - (1.0 / f1 - A)) / ag);
        alg = std::max(alg, std::abs(f4 * f4 * f5 * f5 - B * B) / (ag * ag));
        if (f5 > 1e-6 * std::sqrt(ag)) {
            double f3 = 1.0 / f5;
            alg = std::max(alg, std::abs(f5 * f3 - 1.0));
        }
        // the continued root has |Re s| = f4/sqrt2, |Im s| = f5/sqrt2
        alg = std::max(alg, std::abs(std::abs(a.s.real()) * std::sqrt(2.0) - f4) / std::sqrt(ag));
        alg = std::max(alg, std::abs(std::abs(a.s.imag()) * std::sqrt(2.0) - f5) / std::sqrt(ag));
        ChainAuditSample s{xi, res, alg};
        rep.max_partial = std::max(rep.max_partial, res);
        rep.max_algebraic = std::max(rep.max_algebraic, alg);
        rep.samples.push_back(s);
    }
    rep.ok = rep.max_partial <= 1e-5 && rep.max_algebraic <= 1e-10;
    return rep;
}

SlitPlanePoint sample_region(cplx lam, Region region, unsigned long long key)
{
    if (lam.imag() < 0.0) {
        SlitPlanePoint p = sample_region(std::conj(lam), region, key);
        p.xi = std::conj(p.xi);
        if (p.side == Side::north)
            p.side = Side::south;
        else if (p.side == Side::south)
            p.side = Side::north;
        p.region = classify_region(lam, p.xi);
        return p;
    }
    std::mt19937_64 g(key * 0x9E3779B97F4A7C15ULL + 12345);
    const double al = std::abs(lam), b = lam.imag();
    auto sgn = [&]() { return uniform(g, 0.0, 1.0) < 0.5 ? -1.0 : 1.0; };
    Side side = uniform(g, 0.0, 1.0) < 0.5 ? Side::north : Side::south;
    cplx xi;
    bool strip = b > 0.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        switch (region) {
        case Region::V1:
            xi = cplx(lam.real() + sgn() * log_uniform(g, 1e-2 * al, 1e3), b + log_uniform(g, 1e-2 * al, 1e3));
            break;
        case Region::V4:
            xi = cplx(sgn() * log_uniform(g, 1e-2 * al, 1e3), -log_uniform(g, 1e-2 * al, 1e3));
            break;
        case Region::V2:
        case Region::V3: {
            if (!strip)
                throw error(errc::invalid_argument, "region is empty for real lambda");
            double u = uniform(g, 0.02, 0.98);
            double w = log_uniform(g, 1e-2 * al, 1e2);
            xi = cplx(lam.real() * u + (region == Region::V2 ? -w : w), b * u);
            break;
        }
        case Region::V5:
        case Region::V6:
            if (!strip)
                throw error(errc::invalid_argument, "region is empty for real lambda");
            xi = lam + (region == Region::V5 ? -1.0 : 1.0) * log_uniform(g, 1e-2 * al, 1e2);
            break;
        case Region::V7:
            xi = -log_uniform(g, 1e-2 * al, 1e3);
            break;
        case Region::V8:
            xi = uniform(g, 0.02, 0.98) * lam;
            break;
        case Region::V9:
            xi = 1.0 + log_uniform(g, 1e-4, 1e3);
            break;
        case Region::V10:
            xi = strip ? uniform(g, 0.02, 0.98) : lam.real() + uniform(g, 0.02, 0.98) * (1.0 - lam.real());
            break;
        }
        if (branch_point_index(lam, xi, std::max(1e-3 * al, 1e-7)) >= 0)
            continue;
        Region r = classify_region(lam, xi);
        if (r == region) {
            SlitPlanePoint p;
            p.xi = xi;
            p.region = r;
            p.side = is_slit(r) ? side : Side::interior;
            return p;
        }
    }
    throw error(errc::search_failed, "could not sample the requested region");
}

} // namespace legendre
