#include "legendre/contour.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace legendre {

const char *errc_name(errc c) noexcept
{
    switch (c) {
    case errc::path_hits_branch_point: return "PathHitsBranchPoint";
    case errc::tolerance_not_met: return "ToleranceNotMet";
    case errc::no_convergence: return "NoConvergence";
    case errc::invalid_lambda: return "InvalidLambda";
    case errc::not_upper_half_plane: return "NotUpperHalfPlane";
    case errc::series_out_of_range: return "SeriesOutOfRange";
    case errc::pole_at_lattice_point: return "PoleAtLatticePoint";
    case errc::on_slit_without_side: return "OnSlitWithoutSide";
    case errc::search_failed: return "SearchFailed";
    case errc::ambiguous_loop: return "AmbiguousLoop";
    case errc::overflow_guard: return "OverflowGuard";
    case errc::tracing_budget_exceeded: return "TracingBudgetExceeded";
    case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_numerical(errc c) noexcept
{
    switch (c) {
    case errc::invalid_lambda:
    case errc::not_upper_half_plane:
    case errc::on_slit_without_side:
    case errc::invalid_argument:
    case errc::series_out_of_range:
    case errc::pole_at_lattice_point:
        return false;
    default:
        return true;
    }
}

namespace {

constexpr double t_max = 4.0;
constexpr int table_levels = 10;

struct Node {
    double u, v, w; // u, 1-u, du/dt
};

// levels[0] holds t = j h0 for all j, levels[k > 0] only the odd multiples of h0 / 2^k.
const std::vector<std::vector<Node>> &node_table()
{
    static std::vector<std::vector<Node>> table;
    static std::once_flag once;
    std::call_once(once, [] {
        const double pi = std::numbers::pi;
        table.resize(table_levels);
        double h = 0.5;
        for (int k = 0; k < table_levels; ++k) {
            int jmax = static_cast<int>(std::ceil(t_max / h));
            for (int j = -jmax; j <= jmax; ++j) {
                if (k > 0 && j % 2 == 0)
                    continue;
                double t = j * h;
                double a = pi * std::sinh(t);
                double u = 1.0 / (1.0 + std::exp(-a));
                double v = 1.0 / (1.0 + std::exp(a));
                double w = pi * std::cosh(t) * u * v;
                if (w == 0.0)
                    continue;
                table[k].push_back({u, v, w});
            }
            h *= 0.5;
        }
    });
    return table;
}

double point_segment_distance(cplx p, cplx a, cplx b)
{
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0)
        return std::abs(p - a);
    double t = std::real((p - a) * std::conj(ab)) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

} // namespace

QuadratureResult tanh_sinh_unit(const std::function<cplx(double, double)> &g, double tol, int max_level)
{
    const auto &table = node_table();
    max_level = std::min(max_level, table_levels - 1);
    QuadratureResult res;
    cplx sum = 0.0;
    double l1 = 0.0;
    double h = 0.5;
    cplx prev = 0.0;
    for (int k = 0; k <= max_level; ++k) {
        for (const Node &n : table[k]) {
            cplx gv = g(n.u, n.v);
            ++res.evaluations;
            sum += n.w * gv;
            l1 += n.w * std::abs(gv);
        }
        cplx cur = h * sum;
        double floor = 2e-14 * h * l1;
        if (k >= 2) {
            double err = std::abs(cur - prev);
            if (err <= std::max(tol, floor)) {
                res.value = cur;
                res.abs_error_estimate = std::max(err * err / std::max(std::abs(cur), 1e-300), floor);
                res.abs_error_estimate = std::min(res.abs_error_estimate, err);
                return res;
            }
        }
        prev = cur;
        h *= 0.5;
    }
    // not converged: an infinite estimate tells callers to subdivide
    res.value = prev;
    res.abs_error_estimate = std::numeric_limits<double>::infinity();
    return res;
}

SqrtKernel::SqrtKernel(std::array<cplx, 3> e, double guard) : e_(e), guard_(guard) {}

int SqrtKernel::branch_index(cplx X, double radius) const
{
    for (int k = 0; k < 3; ++k)
        if (std::abs(X - e_[k]) <= radius)
            return k;
    return -1;
}

SheetState SqrtKernel::principal(cplx X) const
{
    SheetState st;
    for (int k = 0; k < 3; ++k)
        st.r[k] = std::sqrt(X - e_[k]);
    st.sign = 1.0;
    return st;
}

SheetState SqrtKernel::seed(cplx X, cplx s_value) const
{
    SheetState st = principal(X);
    cplx prod = st.r[0] * st.r[1] * st.r[2];
    double scale = std::abs(prod);
    if (scale == 0.0)
        throw error(errc::path_hits_branch_point, "branch seed requested at a branch point");
    if (std::abs(s_value - prod) <= 1e-6 * scale)
        st.sign = 1.0;
    else if (std::abs(s_value + prod) <= 1e-6 * scale)
        st.sign = -1.0;
    else
        throw error(errc::invalid_argument, "branch seed does not square to the kernel polynomial");
    return st;
}

SheetState SqrtKernel::carry(cplx from, const SheetState &st, cplx to) const
{
    SheetState out;
    out.sign = st.sign;
    for (int k = 0; k < 3; ++k) {
        cplx df = from - e_[k];
        if (df == 0.0)
            throw error(errc::path_hits_branch_point, "cannot continue a root from a branch point");
        out.r[k] = st.r[k] * std::sqrt((to - e_[k]) / df);
    }
    return out;
}

double SqrtKernel::clearance(cplx a, cplx b) const
{
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        if (a == e_[k] || b == e_[k])
            continue;
        best = std::min(best, point_segment_distance(e_[k], a, b));
    }
    return best;
}

QuadratureResult SqrtKernel::leaf(cplx a0, const SheetState &st0, cplx p, cplx q, const Integrand &f, double tol,
                                  int depth, int max_depth) const
{
    cplx len = q - p;
    bool split = false;
    for (int k = 0; k < 3 && !split; ++k) {
        if (p == e_[k] || q == e_[k])
            continue;
        if (point_segment_distance(e_[k], p, q) < 0.5 * std::abs(len))
            split = true;
    }
    QuadratureResult res;
    if (!split) {
        std::array<cplx, 3> dp, dq, dref;
        for (int k = 0; k < 3; ++k) {
            dp[k] = p - e_[k];
            dq[k] = q - e_[k];
            dref[k] = a0 - e_[k];
        }
        auto g = [&](double u, double v) -> cplx {
            KernelPoint kp;
            if (u < 0.5) {
                kp.X = p + len * u;
                for (int k = 0; k < 3; ++k)
                    kp.d[k] = dp[k] + len * u;
            } else {
                kp.X = q - len * v;
                for (int k = 0; k < 3; ++k)
                    kp.d[k] = dq[k] - len * v;
            }
            for (int k = 0; k < 3; ++k)
                kp.r[k] = st0.r[k] * std::sqrt(kp.d[k] / dref[k]);
            kp.s = st0.sign * kp.r[0] * kp.r[1] * kp.r[2];
            return f(kp) * len;
        };
        int level = depth + 1 >= max_depth ? 9 : 6;
        res = tanh_sinh_unit(g, tol, level);
        if (std::isfinite(res.abs_error_estimate) || depth + 1 >= max_depth)
            return res;
    } else if (depth + 1 >= max_depth) {
        throw error(errc::tolerance_not_met, "segment refinement exhausted near a branch point");
    }
    cplx m = 0.5 * (p + q);
    QuadratureResult lo = leaf(a0, st0, p, m, f, 0.5 * tol, depth + 1, max_depth);
    QuadratureResult hi = leaf(a0, st0, m, q, f, 0.5 * tol, depth + 1, max_depth);
    res.value = lo.value + hi.value;
    res.abs_error_estimate = lo.abs_error_estimate + hi.abs_error_estimate;
    res.evaluations += lo.evaluations + hi.evaluations;
    return res;
}

QuadratureResult SqrtKernel::segment(cplx a, cplx b, const SheetState &at_a, const Integrand &f, double tol,
                                     int max_depth) const
{
    if (a == b)
        return {};
    if (branch_index(a, 0.0) >= 0)
        throw error(errc::path_hits_branch_point, "segment must start at a regular point");
    if (clearance(a, b) < guard_)
        throw error(errc::path_hits_branch_point, "segment passes within the guard radius of a branch point");
    QuadratureResult res = leaf(a, at_a, a, b, f, tol, 0, max_depth);
    if (!(res.abs_error_estimate <= std::max(tol, 1e-13 * std::abs(res.value))))
        throw error(errc::tolerance_not_met, "adaptive quadrature did not reach the requested tolerance");
    return res;
}

QuadratureResult SqrtKernel::ray(cplx a, cplx dir, const SheetState &at_a, const Integrand &f, double tol,
                                 int max_depth) const
{
    dir /= std::abs(dir);
    double far = 0.0;
    for (int k = 0; k < 3; ++k) {
        far = std::max(far, std::abs(a - e_[k]));
        // the ray must not run through a branch point
        cplx rel = (e_[k] - a) / dir;
        if (rel.real() > 0.0 && std::abs(rel.imag()) < guard_)
            throw error(errc::path_hits_branch_point, "ray passes through a branch point");
    }
    double R0 = std::max(1.0, 2.0 * far);
    cplx X0 = a + dir * R0;
    QuadratureResult head = segment(a, X0, at_a, f, 0.5 * tol, max_depth);
    SheetState st0 = carry(a, at_a, X0);
    std::array<cplx, 3> d0;
    for (int k = 0; k < 3; ++k)
        d0[k] = X0 - e_[k];
    auto g = [&](double u, double v) -> cplx {
        if (u < 1e-90)
            return 0.0;
        double stretch = v * (1.0 + u) / (u * u); // 1/u^2 - 1
        KernelPoint kp;
        kp.X = X0 + dir * (R0 * stretch);
        for (int k = 0; k < 3; ++k) {
            kp.d[k] = d0[k] + dir * (R0 * stretch);
            kp.r[k] = st0.r[k] * std::sqrt(kp.d[k] / d0[k]);
        }
        kp.s = st0.sign * kp.r[0] * kp.r[1] * kp.r[2];
        return f(kp) * (2.0 * R0 / (u * u * u)) * dir;
    };
    QuadratureResult tail = tanh_sinh_unit(g, 0.5 * tol, 9);
    if (!(tail.abs_error_estimate <= std::max(0.5 * tol, 1e-13 * std::abs(tail.value))))
        throw error(errc::tolerance_not_met, "tail quadrature did not reach the requested tolerance");
    QuadratureResult res;
    res.value = head.value + tail.value;
    res.abs_error_estimate = head.abs_error_estimate + tail.abs_error_estimate;
    res.evaluations = head.evaluations + tail.evaluations;
    return res;
}

namespace {

struct PreparedPath {
    std::vector<cplx> v;
    bool ray;
    cplx dir;
};

PreparedPath prepare(const ContourPath &path, const SqrtKernel &K)
{
    if (path.vertices.empty())
        throw error(errc::invalid_argument, "path has no vertices");
    PreparedPath pp{path.vertices, path.ray, path.ray_direction};
    for (size_t i = 1; i < pp.v.size(); ++i)
        if (pp.v[i] == pp.v[i - 1])
            throw error(errc::invalid_argument, "consecutive path vertices coincide");
    const auto &e = K.branch_points();
    size_t n = pp.v.size();
    for (size_t i = 0; i < n; ++i) {
        int k = K.branch_index(pp.v[i], K.guard());
        if (k < 0)
            continue;
        bool first = i == 0, last = i + 1 == n && !pp.ray;
        bool allowed = (first && path.endpoint_singular[0]) || (last && path.endpoint_singular[1]);
        if (!allowed)
            throw error(errc::path_hits_branch_point, "path vertex lies on a branch point");
        pp.v[i] = e[k];
    }
    if (pp.ray) {
        if (std::abs(pp.dir) == 0.0)
            throw error(errc::invalid_argument, "ray direction is zero");
        cplx last = pp.v.back();
        if (K.branch_index(last, 0.0) >= 0) {
            double far = 0.0;
            for (int k = 0; k < 3; ++k)
                far = std::max(far, std::abs(last - e[k]));
            pp.v.push_back(last + pp.dir / std::abs(pp.dir) * std::max(1.0, far));
        }
    }
    for (size_t i = 1; i < pp.v.size(); ++i)
        if (K.clearance(pp.v[i - 1], pp.v[i]) < K.guard())
            throw error(errc::path_hits_branch_point, "path segment passes within the guard radius of a branch point");
    return pp;
}

} // namespace

QuadratureResult integrate(const ContourPath &path, const std::array<cplx, 3> &branch_points, const Integrand &f,
                           const EngineOptions &opt)
{
    SqrtKernel K(branch_points, opt.guard);
    PreparedPath pp = prepare(path, K);
    QuadratureResult total;
    if (pp.v.size() == 1 && !pp.ray)
        return total;
    size_t nseg = pp.v.size() - 1 + (pp.ray ? 1 : 0);
    double tseg = opt.tol / static_cast<double>(nseg);
    auto add = [&](const QuadratureResult &r, double sgn) {
        total.value += sgn * r.value;
        total.abs_error_estimate += r.abs_error_estimate;
        total.evaluations += r.evaluations;
    };
    SheetState st;
    size_t i0 = 0;
    if (K.branch_index(pp.v[0], 0.0) >= 0) {
        cplx m = 0.5 * (pp.v[0] + pp.v[1]);
        SheetState sm = K.seed(m, path.branch_seed);
        add(K.segment(m, pp.v[0], sm, f, 0.5 * tseg, opt.max_depth), -1.0);
        add(K.segment(m, pp.v[1], sm, f, 0.5 * tseg, opt.max_depth), 1.0);
        if (pp.v.size() > 2 || pp.ray)
            st = K.carry(m, sm, pp.v[1]);
        i0 = 1;
    } else {
        st = K.seed(pp.v[0], path.branch_seed);
    }
    for (size_t i = i0; i + 1 < pp.v.size(); ++i) {
        add(K.segment(pp.v[i], pp.v[i + 1], st, f, tseg, opt.max_depth), 1.0);
        if (i + 2 < pp.v.size() || pp.ray)
            st = K.carry(pp.v[i], st, pp.v[i + 1]);
    }
    if (pp.ray)
        add(K.ray(pp.v.back(), pp.dir, st, f, tseg, opt.max_depth), 1.0);
    return total;
}

QuadratureResult integrate_sqrt_kernel(const ContourPath &path, const std::vector<cplx> &numerator,
                                       const std::array<cplx, 3> &branch_points, double tol)
{
    if (!(tol > 0.0))
        throw error(errc::invalid_argument, "tolerance must be positive");
    auto f = [&](const KernelPoint &kp) {
        cplx p = 0.0;
        for (auto it = numerator.rbegin(); it != numerator.rend(); ++it)
            p = p * kp.X + *it;
        return p / kp.s;
    };
    EngineOptions opt;
    opt.tol = tol;
    return integrate(path, branch_points, f, opt);
}

cplx continue_branch(const ContourPath &path, const std::array<cplx, 3> &branch_points, double guard)
{
    SqrtKernel K(branch_points, guard);
    ContourPath p = path;
    p.ray = false;
    PreparedPath pp = prepare(p, K);
    if (pp.v.size() == 1)
        return K.branch_index(pp.v[0], 0.0) >= 0 ? cplx(0.0) : path.branch_seed;
    SheetState st;
    cplx at;
    if (K.branch_index(pp.v[0], 0.0) >= 0) {
        at = 0.5 * (pp.v[0] + pp.v[1]);
        st = K.seed(at, path.branch_seed);
    } else {
        at = pp.v[0];
        st = K.seed(at, path.branch_seed);
    }
    for (size_t i = 1; i < pp.v.size(); ++i) {
        if (K.branch_index(pp.v[i], 0.0) >= 0)
            return 0.0;
        st = K.carry(at, st, pp.v[i]);
        at = pp.v[i];
    }
    return K.root(at, st);
}

cplx sum_power_series(const std::function<cplx(long)> &coeff, cplx x, double tol, double majorant_ratio,
                      long max_terms)
{
    if (!(majorant_ratio > 0.0 && majorant_ratio < 1.0))
        throw error(errc::no_convergence, "majorant ratio must lie in (0, 1)");
    if (!(tol > 0.0))
        throw error(errc::invalid_argument, "tolerance must be positive");
    cplx sum = 0.0;
    cplx xn = 1.0;
    double prev = -1.0;
    int violations = 0;
    for (long n = 0; n < max_terms; ++n) {
        cplx term = coeff(n) * xn;
        sum += term;
        double a = std::abs(term);
        if (prev > 0.0 && a > majorant_ratio * prev * (1.0 + 1e-12)) {
            if (++violations > 64)
                throw error(errc::no_convergence, "series terms are not dominated by the majorant");
        } else {
            violations = 0;
        }
        if (n > 0 && a * majorant_ratio / (1.0 - majorant_ratio) < tol)
            return sum;
        if (n == 0 && a == 0.0 && x == 0.0)
            return sum;
        if (x == 0.0)
            return sum;
        prev = a;
        xn *= x;
    }
    throw error(errc::no_convergence, "series did not converge within the term budget");
}

} // namespace legendre
