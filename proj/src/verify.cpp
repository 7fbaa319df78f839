#include "legendre/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

#include "legendre/abel.hpp"
#include "legendre/errors.hpp"
#include "legendre/modular.hpp"
#include "legendre/weierstrass.hpp"

namespace legendre {

namespace {

constexpr double pi = std::numbers::pi;

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t x = a * 0x9E3779B97F4A7C15ULL ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2));
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return x;
}

double unit(std::mt19937_64 &g) { return std::uniform_real_distribution<double>(0.0, 1.0)(g); }

CheckRecord record(std::string check, Fields inputs, double value, double bound, Compare cmp, double allow = 0.0)
{
    CheckRecord r;
    r.check = std::move(check);
    r.inputs = std::move(inputs);
    r.value = value;
    r.bound = bound;
    r.cmp = cmp;
    r.slack = cmp == Compare::le ? bound - value : value - bound;
    r.pass = std::isfinite(value) && r.slack >= -allow;
    return r;
}

CheckRecord failed(std::string check, Fields inputs, const std::string &err)
{
    CheckRecord r;
    r.check = std::move(check);
    r.inputs = std::move(inputs);
    r.value = std::nan("");
    r.slack = std::nan("");
    r.pass = false;
    r.error = err;
    return r;
}

Fields lam_fields(cplx lam) { return {{"lambda_re", lam.real()}, {"lambda_im", lam.imag()}}; }

Fields point_fields(cplx lam, const SlitPlanePoint &p)
{
    Fields f = lam_fields(lam);
    f.push_back({"xi_re", p.xi.real()});
    f.push_back({"xi_im", p.xi.imag()});
    f.push_back({"region", std::string(region_name(p.region))});
    f.push_back({"side", std::string(side_name(p.side))});
    return f;
}

// runs body(check, inputs) and turns engine errors into failed records
template <class F>
void guarded(std::vector<CheckRecord> &out, const std::string &check, const Fields &inputs, F &&body)
{
    try {
        body();
    } catch (const error &e) {
        out.push_back(failed(check, inputs, errc_name(e.code())));
    } catch (const std::exception &e) {
        out.push_back(failed(check, inputs, "exception"));
    }
}

std::vector<Region> nonempty_regions(cplx lam)
{
    std::vector<Region> rs;
    for (int j = 1; j <= 10; ++j) {
        Region r = Region(j);
        bool strip_only = r == Region::V2 || r == Region::V3 || r == Region::V5 || r == Region::V6;
        if (strip_only && lam.imag() == 0.0)
            continue;
        rs.push_back(r);
    }
    return rs;
}

using Task = std::function<std::vector<CheckRecord>()>;

std::vector<CheckRecord> run_tasks(const std::vector<Task> &tasks, int threads)
{
    std::vector<std::vector<CheckRecord>> parts(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i; (i = next.fetch_add(1)) < tasks.size();)
            parts[i] = tasks[i]();
    };
    int nt = std::max(1, std::min<int>(threads, int(tasks.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    std::vector<CheckRecord> all;
    for (auto &p : parts)
        all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return all;
}

long long pick(long long requested, long long def) { return requested > 0 ? requested : def; }

// split `total` samples over `count` lambdas
long long share(long long total, int count, int k) { return total / count + (k < total % count ? 1 : 0); }

std::vector<Task> betti42_tasks(const RunConfig &cfg)
{
    long long total = pick(cfg.samples, 10000);
    auto lams = sweep_lambdas(cfg.seed, 20);
    std::vector<Task> tasks;
    for (int k = 0; k < int(lams.size()); ++k) {
        cplx lam = lams[k];
        long long m = share(total, int(lams.size()), k);
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            AbelMap map(lam, cfg.tol);
            auto regions = nonempty_regions(lam);
            for (long long i = 0; i < m; ++i) {
                Region reg = regions[i % regions.size()];
                SlitPlanePoint p = sample_region(lam, reg, mix(mix(cfg.seed, 1), k * 1000003ULL + i));
                Fields in = point_fields(lam, p);
                guarded(out, "betti_max", in, [&]() {
                    BettiCoords b = betti(map, p);
                    out.push_back(record("betti_max", in, std::max(std::abs(b.b1), std::abs(b.b2)), 42.0,
                                         Compare::le, 1e-6));
                });
            }
            return out;
        });
    }
    return tasks;
}

std::vector<Task> imL_tasks(const RunConfig &cfg)
{
    long long total = pick(cfg.samples, 2000);
    auto lams = sweep_lambdas(cfg.seed, 20);
    std::vector<Task> tasks;
    for (int k = 0; k < int(lams.size()); ++k) {
        cplx lam = lams[k];
        long long m = share(total, int(lams.size()), k);
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            AbelMap map(lam, cfg.tol);
            auto regions = nonempty_regions(lam);
            for (long long i = 0; i < m; ++i) {
                Region reg = regions[i % regions.size()];
                SlitPlanePoint p = sample_region(lam, reg, mix(mix(cfg.seed, 2), k * 1000003ULL + i));
                Fields in = point_fields(lam, p);
                guarded(out, "abs_im_L", in, [&]() {
                    cplx L = log_phi_L(map, p);
                    Fields in2 = in;
                    in2.push_back({"im_L_over_2pi", L.imag() / (2 * pi)});
                    out.push_back(record("abs_im_L", in2, std::abs(L.imag()), 2409.0, Compare::le));
                });
            }
            return out;
        });
    }
    return tasks;
}

std::vector<Task> numerator_tasks(const RunConfig &cfg)
{
    long long per = pick(cfg.samples, 1000);
    auto lams = sweep_lambdas(cfg.seed, 20);
    std::vector<Task> tasks;
    for (int k = 0; k < int(lams.size()); ++k) {
        cplx lam = lams[k];
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            AbelMap map(lam, cfg.tol);
            const std::pair<Boundary, const char *> bs[] = {
                {Boundary::neg_axis, "neg_axis"}, {Boundary::L_lambda, "L_lambda"}, {Boundary::one_infty, "one_infty"}};
            for (auto [b, name] : bs) {
                Fields in = lam_fields(lam);
                in.push_back({"boundary", std::string(name)});
                in.push_back({"points", per});
                guarded(out, "numerator_max", in, [&]() {
                    NumeratorReport r = numerator_bound_check(map, b, int(per));
                    double bound = numerator_bound(b, lam);
                    double worst = 0.0;
                    for (const auto &s : r.samples)
                        worst = std::max({worst, s.absB1, s.absB2});
                    out.push_back(record("numerator_max", in, worst, bound, Compare::le));
                });
            }
            return out;
        });
    }
    return tasks;
}

std::vector<Task> area_tasks(const RunConfig &cfg)
{
    long long total = pick(cfg.samples, 500);
    const int chunk = 25;
    std::vector<Task> tasks;
    for (long long start = 0; start < total; start += chunk) {
        long long end = std::min(total, start + chunk);
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            for (long long i = start; i < end; ++i) {
                cplx lam = sample_lambda_F(mix(mix(cfg.seed, 4), i));
                Fields in = lam_fields(lam);
                guarded(out, "lemma_area", in, [&]() {
                    PeriodData pd = compute_periods(lam, std::max(cfg.tol, 1e-13));
                    cplx tau = pd.omega2 / pd.omega1;
                    out.push_back(record("re_tau", in, std::abs(tau.real()), 0.5, Compare::le, 1e-9));
                    out.push_back(record("abs_tau", in, std::abs(tau), 1.0, Compare::ge, 1e-9));
                    out.push_back(record("min_period", in, std::min(std::abs(pd.omega1), std::abs(pd.omega2)), 1.0,
                                         Compare::ge, 1e-9));
                    // the area bound is stated on Gamma, which F and 1 - F cover
                    cplx lg = (i % 2) ? 1.0 - std::conj(lam) : lam;
                    Fields ing = lam_fields(lg);
                    PeriodData pg = (i % 2) ? compute_periods(lg, std::max(cfg.tol, 1e-13)) : pd;
                    AreaCheck a = area_lower_bound_check(classify_lambda(lg), pg);
                    out.push_back(record("area", ing, a.lhs, a.rhs, Compare::ge, 1e-6));
                });
            }
            return out;
        });
    }
    return tasks;
}

std::vector<Task> legendre_tasks(const RunConfig &cfg)
{
    long long total = pick(cfg.samples, 200);
    const int chunk = 20;
    std::vector<Task> tasks;
    for (long long start = 0; start < total; start += chunk) {
        long long end = std::min(total, start + chunk);
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            for (long long i = start; i < end; ++i) {
                std::uint64_t key = mix(mix(cfg.seed, 5), i);
                cplx lam = s3_orbit(sample_lambda_F(key))[key % 6];
                Fields in = lam_fields(lam);
                guarded(out, "legendre_relation", in, [&]() {
                    PeriodData pd = compute_periods(lam, std::max(cfg.tol, 1e-13));
                    double r = std::abs(pd.omega2 * pd.eta1 - pd.omega1 * pd.eta2 - cplx(0.0, 2 * pi));
                    out.push_back(record("legendre_relation", in, r, 1e-9, Compare::le));
                });
            }
            return out;
        });
    }
    return tasks;
}

std::vector<Task> halfperiod_tasks(const RunConfig &cfg)
{
    auto lams = sweep_lambdas(cfg.seed, int(pick(cfg.samples, 30)));
    std::vector<Task> tasks;
    for (cplx lam : lams) {
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            Fields in = lam_fields(lam);
            guarded(out, "halfperiods", in, [&]() {
                AbelMap map(lam, cfg.tol);
                const PeriodData &pd = map.periods();
                const Lattice &lat = map.lattice();
                struct Row {
                    const char *name;
                    cplx half, wp_expect, branch;
                };
                const Row rows[] = {
                    {"omega1/2", pd.omega1 / 2.0, (2.0 - lam) / 3.0, 1.0},
                    {"omega2/2", pd.omega2 / 2.0, -(lam + 1.0) / 3.0, 0.0},
                    {"(omega1+omega2)/2", (pd.omega1 + pd.omega2) / 2.0, (2.0 * lam - 1.0) / 3.0, lam},
                };
                for (const auto &row : rows) {
                    Fields f = in;
                    f.push_back({"half_period", std::string(row.name)});
                    double e = std::abs(lat.wp(row.half) - row.wp_expect) / std::max(1.0, std::abs(row.wp_expect));
                    out.push_back(record("wp_half_period", f, e, 1e-8, Compare::le));
                    cplx z = map.z(make_point(lam, row.branch));
                    double ez = std::abs(z - row.half) / std::abs(pd.omega1);
                    out.push_back(record("z_branch_point", f, ez, 1e-8, Compare::le));
                }
            });
            return out;
        });
    }
    return tasks;
}

std::vector<Task> psi_tasks(const RunConfig &cfg)
{
    long long total = pick(cfg.samples, 2000);
    auto lams = sweep_lambdas(cfg.seed, 20);
    std::vector<Task> tasks;
    for (int k = 0; k < int(lams.size()); ++k) {
        cplx lam = lams[k];
        long long m = share(total, int(lams.size()), k);
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            Fields base = lam_fields(lam);
            guarded(out, "abs_im_psi", base, [&]() {
                PeriodData pd = compute_periods(lam, std::max(cfg.tol, 1e-13));
                std::mt19937_64 g(mix(mix(cfg.seed, 7), k));
                for (long long i = 0; i < m; ++i) {
                    double r1 = unit(g), r2 = unit(g);
                    long long n = (i % 3 == 0) ? 42 : (i % 3 == 1) ? -42 : (long long)(unit(g) * 85) - 42;
                    cplx zt = r1 * pd.omega1 + r2 * pd.omega2;
                    cplx psi = psi_n_eval(n, zt, pd.omega1, pd.omega2);
                    Fields in = base;
                    in.push_back({"r1", r1});
                    in.push_back({"r2", r2});
                    in.push_back({"n", n});
                    out.push_back(record("abs_im_psi", in, std::abs(psi.imag()) / (2 * pi), 515.0, Compare::le));
                }
            });
            return out;
        });
    }
    return tasks;
}

std::vector<Task> chain_tasks(const RunConfig &cfg)
{
    long long per = pick(cfg.samples, 20);
    std::vector<cplx> lams;
    for (cplx l : sweep_lambdas(cfg.seed, 12))
        if (l.imag() != 0.0)
            lams.push_back(l);
    std::vector<Task> tasks;
    for (int k = 0; k < int(lams.size()); ++k) {
        cplx lam = lams[k];
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            AbelMap map(lam, cfg.tol);
            for (Region reg : nonempty_regions(lam)) {
                Fields in = lam_fields(lam);
                in.push_back({"region", std::string(region_name(reg))});
                in.push_back({"points", per});
                guarded(out, "chain_partials", in, [&]() {
                    ChainAuditReport r = chain_derivative_audit(map, reg, int(per), mix(cfg.seed, 8 + k));
                    out.push_back(record("chain_partials", in, r.max_partial, 1e-5, Compare::le));
                    out.push_back(record("chain_algebraic", in, r.max_algebraic, 1e-10, Compare::le));
                });
            }
            return out;
        });
    }
    return tasks;
}

std::vector<Task> north_south_tasks(const RunConfig &cfg)
{
    long long total = pick(cfg.samples, 3000);
    auto lams = sweep_lambdas(cfg.seed, 10);
    std::vector<Task> tasks;
    for (int k = 0; k < int(lams.size()); ++k) {
        cplx lam = lams[k];
        long long m = share(total, int(lams.size()), k);
        tasks.push_back([=, &cfg]() {
            std::vector<CheckRecord> out;
            AbelMap map(lam, cfg.tol);
            const Region slits[] = {Region::V7, Region::V8, Region::V9};
            for (long long i = 0; i < m; ++i) {
                SlitPlanePoint p = sample_region(lam, slits[i % 3], mix(mix(cfg.seed, 9), k * 1000003ULL + i));
                Fields in = lam_fields(lam);
                in.push_back({"xi_re", p.xi.real()});
                in.push_back({"xi_im", p.xi.imag()});
                in.push_back({"region", std::string(region_name(p.region))});
                guarded(out, "north_south", in, [&]() {
                    NorthSouthSample s = north_south(map, p.xi);
                    out.push_back(record("north_south_relation", in, s.relation_residual, 1e-8, Compare::le));
                    out.push_back(record("north_south_betti_gap", in, s.betti_gap, 1.0, Compare::le, 1e-9));
                });
            }
            return out;
        });
    }
    return tasks;
}

} // namespace

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("LEGENDRE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

cplx sample_lambda_F(std::uint64_t key, double log_min)
{
    std::mt19937_64 g(mix(key, 0x5EED));
    double rho = std::pow(10.0, log_min * unit(g));
    // |1 - lambda| <= 1 and Re lambda <= 1/2 in terms of cos(arg lambda)
    double lo = rho / 2.0, hi = std::min(1.0, 1.0 / (2.0 * rho));
    double c = lo + (hi - lo) * unit(g);
    double th = std::acos(std::clamp(c, -1.0, 1.0)) * (unit(g) < 0.5 ? -1.0 : 1.0);
    return std::polar(rho, th);
}

std::vector<cplx> sweep_lambdas(std::uint64_t seed, int count)
{
    const cplx spine[] = {
        std::polar(1e-6, pi / 4), cplx(1e-5, 0.0), std::polar(1e-4, -pi / 3), std::polar(1e-3, 0.45 * pi),
        std::polar(1e-2, -pi / 4), std::polar(0.1, pi / 3), cplx(0.3, 0.0), cplx(0.45, 0.6),
        cplx(0.2, -0.5), cplx(0.5, 0.5),
    };
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) {
        if (i < int(std::size(spine)))
            out.push_back(spine[i]);
        else
            out.push_back(sample_lambda_F(mix(seed, 1000 + i)));
    }
    return out;
}

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names = {"betti42",   "imL384",     "numerators",  "lemma_area", "legendre",
                                                   "halfperiods", "psi515", "chain_audit", "north_south"};
    return names;
}

VerificationReport run_suite(const std::string &suite, const RunConfig &cfg)
{
    if (!(cfg.tol > 0.0 && cfg.tol <= 1e-2))
        throw error(errc::invalid_argument, "tol must lie in (0, 1e-2]");
    if (cfg.samples < 0)
        throw error(errc::invalid_argument, "samples must be positive");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Task> tasks;
    if (suite == "betti42")
        tasks = betti42_tasks(cfg);
    else if (suite == "imL384")
        tasks = imL_tasks(cfg);
    else if (suite == "numerators")
        tasks = numerator_tasks(cfg);
    else if (suite == "lemma_area")
        tasks = area_tasks(cfg);
    else if (suite == "legendre")
        tasks = legendre_tasks(cfg);
    else if (suite == "halfperiods")
        tasks = halfperiod_tasks(cfg);
    else if (suite == "psi515")
        tasks = psi_tasks(cfg);
    else if (suite == "chain_audit")
        tasks = chain_tasks(cfg);
    else if (suite == "north_south")
        tasks = north_south_tasks(cfg);
    else
        throw error(errc::invalid_argument, "unknown suite '" + suite + "'");

    VerificationReport rep;
    rep.suite = suite;
    rep.records = run_tasks(tasks, resolve_threads(cfg.threads));
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rep.records.size(); ++i) {
        const auto &r = rep.records[i];
        if (!r.error.empty())
            ++rep.numerical_failures;
        if (!r.pass) {
            ++rep.failures;
            if (rep.first_failure < 0)
                rep.first_failure = (long long)i;
        }
        if (r.error.empty()) {
            if (r.cmp == Compare::le)
                rep.max_value = std::max(rep.max_value, r.value);
            rep.min_slack = std::min(rep.min_slack, r.slack);
        }
    }
    if (rep.records.empty())
        rep.min_slack = 0.0;
    rep.pass = rep.failures == 0 && !rep.records.empty();
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace legendre
