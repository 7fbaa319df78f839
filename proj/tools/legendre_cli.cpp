// legendre: evaluation, verification sweeps, format tuples, zero bounds, monodromy.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "legendre/abel.hpp"
#include "legendre/errors.hpp"
#include "legendre/modular.hpp"
#include "legendre/pfaffian.hpp"
#include "legendre/verify.hpp"

using json = nlohmann::ordered_json;
using namespace legendre;

namespace {

enum Exit { ok = 0, check_failed = 1, usage = 2, numerical = 3 };

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json cj(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

cplx parse_complex(const std::string &s)
{
    std::istringstream is(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(is >> re))
        throw Usage("cannot parse complex number '" + s + "' (expected re,im)");
    if (is >> comma) {
        if (comma != ',' || !(is >> im))
            throw Usage("cannot parse complex number '" + s + "' (expected re,im)");
    }
    std::string rest;
    if (is >> rest)
        throw Usage("trailing characters in '" + s + "'");
    return {re, im};
}

std::string timestamp()
{
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Collects flat records and writes them as JSON lines or one CSV table.
class Emitter {
public:
    Emitter(std::ostream &os, bool csv, bool stamp) : os_(os), csv_(csv), stamp_(stamp) {}

    void emit(json rec)
    {
        if (stamp_)
            rec["timestamp"] = timestamp();
        if (!csv_) {
            os_ << rec.dump() << '\n';
            return;
        }
        std::vector<std::pair<std::string, std::string>> row;
        flatten("", rec, row);
        for (auto &[k, v] : row)
            if (!index_.count(k)) {
                index_[k] = columns_.size();
                columns_.push_back(k);
            }
        rows_.push_back(std::move(row));
    }

    void finish()
    {
        if (!csv_)
            return;
        for (size_t i = 0; i < columns_.size(); ++i)
            os_ << (i ? "," : "") << columns_[i];
        os_ << '\n';
        for (auto &row : rows_) {
            std::vector<std::string> cells(columns_.size());
            for (auto &[k, v] : row)
                cells[index_[k]] = v;
            for (size_t i = 0; i < cells.size(); ++i)
                os_ << (i ? "," : "") << cells[i];
            os_ << '\n';
        }
    }

private:
    std::ostream &os_;
    bool csv_, stamp_;
    std::vector<std::string> columns_;
    std::map<std::string, size_t> index_;
    std::vector<std::vector<std::pair<std::string, std::string>>> rows_;

    static void flatten(const std::string &prefix, const json &j, std::vector<std::pair<std::string, std::string>> &out)
    {
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
        } else if (j.is_array()) {
            for (size_t i = 0; i < j.size(); ++i)
                flatten(prefix + "." + std::to_string(i), j[i], out);
        } else if (j.is_string()) {
            std::string s = j.get<std::string>();
            if (s.find_first_of(",\"\n") != std::string::npos) {
                std::string q = "\"";
                for (char c : s)
                    q += c == '"' ? std::string("\"\"") : std::string(1, c);
                s = q + "\"";
            }
            out.push_back({prefix, s});
        } else if (j.is_null()) {
            out.push_back({prefix, ""});
        } else {
            out.push_back({prefix, j.dump()});
        }
    }
};

json field_json(const FieldValue &v)
{
    return std::visit([](const auto &x) { return json(x); }, v);
}

json record_json(const CheckRecord &r, size_t index)
{
    json in = json::object();
    for (const auto &[k, v] : r.inputs)
        in[k] = field_json(v);
    json j = {{"type", "record"}, {"index", index}, {"check", r.check}, {"inputs", in}};
    if (r.error.empty()) {
        j["value"] = r.value;
        j["slack"] = r.slack;
    } else {
        j["value"] = nullptr;
        j["slack"] = nullptr;
    }
    j["bound"] = r.bound;
    j["compare"] = r.cmp == Compare::le ? "le" : "ge";
    j["pass"] = r.pass;
    j["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    return j;
}

json bigint_json(const bigint &v)
{
    if (v <= bigint(std::numeric_limits<std::uint64_t>::max()))
        return json(v.convert_to<std::uint64_t>());
    return json(v.str());
}

struct Globals {
    RunConfig cfg;
    std::string out_path;
    bool csv = false;
    bool no_timestamp = false;
    std::string output_format = "json-lines";
};

// z from "re,im" or "b1,b2@basis" (z = b1 omega1 + b2 omega2)
cplx parse_z(const std::string &s, const PeriodData &pd)
{
    auto at = s.find('@');
    if (at == std::string::npos)
        return parse_complex(s);
    if (s.substr(at + 1) != "basis")
        throw Usage("unknown basis '" + s.substr(at + 1) + "' (only 'basis' is supported)");
    cplx b = parse_complex(s.substr(0, at));
    return b.real() * pd.omega1 + b.imag() * pd.omega2;
}

Side parse_side(const std::string &s)
{
    if (s.empty() || s == "interior")
        return Side::interior;
    if (s == "north")
        return Side::north;
    if (s == "south")
        return Side::south;
    throw Usage("side must be north, south or interior");
}

int cmd_eval(const Globals &g, Emitter &em, const std::string &fn, const std::string &lam_s, const std::string &z_s,
             const std::string &xi_s, const std::string &side_s)
{
    cplx lam = parse_complex(lam_s);
    ReducedLambda red = reduce_lambda_to_F(lam);
    json rec = {{"type", "eval"},
                {"function", fn},
                {"lambda", cj(lam)},
                {"reduced_lambda", cj(red.param.lambda)},
                {"orbit_index", red.orbit_index}};
    const bool takes_z = fn == "wp" || fn == "wp_prime" || fn == "zeta" || fn == "sigma" || fn == "phi";
    if (takes_z) {
        if (z_s.empty())
            throw Usage(fn + " needs --z");
        PeriodData pd = compute_periods(lam, std::max(g.cfg.tol, 1e-13));
        Lattice lat(pd);
        cplx z = parse_z(z_s, pd);
        cplx v = fn == "wp" ? lat.wp(z) : fn == "wp_prime" ? lat.wp_prime(z) : fn == "zeta" ? lat.zeta(z)
                                       : fn == "sigma"      ? lat.sigma(z)
                                                             : lat.phi(z);
        rec["z"] = cj(z);
        rec["value"] = cj(v);
        rec["route"] = pd.route;
        em.emit(rec);
        return ok;
    }
    if (fn != "abel_z" && fn != "betti" && fn != "L")
        throw Usage("unknown function '" + fn + "'");
    if (xi_s.empty())
        throw Usage(fn + " needs --xi");
    if (!classify_lambda(lam).in_F)
        throw Usage("lambda is not in F; the reduced value is " + std::to_string(red.param.lambda.real()) + "," +
                    std::to_string(red.param.lambda.imag()));
    AbelMap map(lam, g.cfg.tol);
    SlitPlanePoint p = make_point(lam, parse_complex(xi_s), parse_side(side_s));
    rec["xi"] = cj(p.xi);
    rec["region"] = region_name(p.region);
    rec["side"] = side_name(p.side);
    if (fn == "abel_z") {
        rec["value"] = cj(map.z(p));
    } else if (fn == "betti") {
        BettiCoords b = betti(map, p);
        rec["value"] = {{"b1", b.b1}, {"b2", b.b2}};
        rec["bound"] = 42;
        rec["pass"] = std::max(std::abs(b.b1), std::abs(b.b2)) <= 42.0;
    } else {
        cplx L = log_phi_L(map, p);
        rec["value"] = cj(L);
        rec["im_L_over_2pi"] = L.imag() / (2 * std::numbers::pi);
    }
    auto route = map.route_from_center(p);
    json verts = json::array();
    for (cplx v : route.vertices)
        verts.push_back(cj(v));
    rec["route"] = verts;
    em.emit(rec);
    return ok;
}

int cmd_verify(const Globals &g, Emitter &em, const std::string &suite)
{
    VerificationReport rep = run_suite(suite, g.cfg);
    for (size_t i = 0; i < rep.records.size(); ++i)
        em.emit(record_json(rep.records[i], i));
    json sum = {{"type", "summary"},
                {"suite", rep.suite},
                {"records", rep.records.size()},
                {"failures", rep.failures},
                {"numerical_failures", rep.numerical_failures},
                {"max_value", rep.max_value},
                {"min_slack", rep.min_slack},
                {"first_failure", rep.first_failure},
                {"pass", rep.pass}};
    if (!g.no_timestamp)
        sum["wall_seconds"] = rep.wall_seconds;
    if (!g.csv)
        em.emit(sum);
    std::cerr << suite << ": " << (rep.pass ? "pass" : "FAIL") << ", " << rep.records.size() << " records, max value "
              << rep.max_value << ", min slack " << rep.min_slack << '\n';
    if (rep.first_failure >= 0)
        std::cerr << "first failing record: " << record_json(rep.records[rep.first_failure], rep.first_failure).dump()
                  << '\n';
    if (rep.pass)
        return ok;
    return rep.numerical_failures > 0 && rep.numerical_failures == rep.failures ? numerical : check_failed;
}

int cmd_formats(Emitter &em, const std::string &which)
{
    std::vector<TheoremFunction> fs;
    if (which == "wp" || which == "all")
        fs.push_back(TheoremFunction::wp);
    if (which == "zeta" || which == "all")
        fs.push_back(TheoremFunction::zeta);
    if (which == "phi" || which == "all")
        fs.push_back(TheoremFunction::phi);
    if (fs.empty())
        throw Usage("--which must be wp, zeta, phi or all");
    for (auto w : fs) {
        PfaffianFormat f = compose_theorem_format(w);
        em.emit({{"type", "format"},
                 {"which", function_name(w)},
                 {"r", f.r},
                 {"alpha", f.alpha},
                 {"beta", f.beta},
                 {"n", f.n},
                 {"L", bigint_json(f.L)},
                 {"M", f.M},
                 {"tuple", to_string(f)},
                 {"pieces", bigint_json(theorem_piece_count(w))},
                 {"explicit_points", 3}});
    }
    return ok;
}

int cmd_zero_bound(Emitter &em, long long T)
{
    PfaffianFormat f = compose_theorem_format(TheoremFunction::wp);
    ZeroBound z = khovanskii_zero_bound(f, T);
    bigint anchor = corollary_anchor(T);
    double ratio = z.value.convert_to<double>() / anchor.convert_to<double>();
    bool pass = z.value <= anchor;
    em.emit({{"type", "zero_bound"},
             {"T", T},
             {"format", to_string(f)},
             {"effective_beta", z.effective_beta},
             {"bound", z.value.str()},
             {"anchor", anchor.str()},
             {"ratio", ratio},
             {"degree_too_small", z.degree_too_small},
             {"pass", pass}});
    if (z.degree_too_small)
        std::cerr << "warning: T < 20 lies outside the corollary's range; value computed anyway\n";
    return pass || z.degree_too_small ? ok : check_failed;
}

int cmd_monodromy(const Globals &g, Emitter &em, const std::string &word, const std::string &lam_s,
                  const std::string &puncture)
{
    json rec = {{"type", "monodromy"}};
    if (!word.empty()) {
        std::vector<int> w = parse_word(word);
        MonodromyElement e = monodromy_rho(w);
        rec["word"] = word;
        rec["element"] = {{"sign", e.sign}, {"t1", e.t1}, {"t2", e.t2}};
        rec["text"] = to_string(e);
    }
    int code = ok;
    if (!puncture.empty()) {
        int idx = puncture == "0" ? 0 : puncture == "1" ? 1 : puncture == "lambda" ? 2 : -1;
        if (idx < 0)
            throw Usage("--puncture must be 0, 1 or lambda");
        cplx lam = parse_complex(lam_s);
        AbelMap map(lam, g.cfg.tol);
        MonodromyNumeric m = monodromy_numeric(map, standard_loop(lam, idx));
        MonodromyElement expect = monodromy_generator(idx + 1);
        rec["lambda"] = cj(lam);
        rec["puncture"] = puncture;
        rec["numeric"] = {{"sign", m.element.sign}, {"t1", m.element.t1}, {"t2", m.element.t2}};
        rec["numeric_text"] = to_string(m.element);
        rec["expected_text"] = to_string(expect);
        rec["residual"] = m.residual;
        bool pass = m.element == expect && m.residual < 1e-6;
        rec["pass"] = pass;
        code = pass ? ok : check_failed;
    }
    if (word.empty() && puncture.empty())
        throw Usage("monodromy needs --word or --puncture");
    em.emit(rec);
    return code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Periods, Weierstrass functions and abelian integrals of the Legendre family"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file with tol, seed, samples, threads, output_format");
    Globals g;
    app.add_option("--tol", g.cfg.tol, "integration tolerance, in (0, 1e-2]");
    app.add_option("--seed", g.cfg.seed, "random seed");
    app.add_option("--samples", g.cfg.samples, "sample count (0: suite default)");
    app.add_option("--threads", g.cfg.threads, "worker threads (0: LEGENDRE_THREADS or all cores)");
    app.add_option("--output_format,--output-format", g.output_format, "json-lines or csv")
        ->check(CLI::IsMember({"json-lines", "csv"}));
    app.add_flag("--csv", g.csv, "write CSV instead of JSON lines");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit timestamps and wall times");
    app.add_option("--out", g.out_path, "write output to this file");

    std::string fn, lam_s, z_s, xi_s, side_s;
    auto *eval = app.add_subcommand("eval", "evaluate one function");
    eval->fallthrough();
    eval->add_option("function", fn, "wp, wp_prime, zeta, sigma, phi, abel_z, betti, L")->required();
    eval->add_option("--lambda", lam_s, "lambda as re,im")->required();
    eval->add_option("--z", z_s, "z as re,im or b1,b2@basis");
    eval->add_option("--xi", xi_s, "xi as re,im");
    eval->add_option("--side", side_s, "north or south for points on a slit");

    std::string suite;
    auto *verify = app.add_subcommand("verify", "run a verification sweep");
    verify->fallthrough();
    verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

    std::string which = "all";
    auto *formats = app.add_subcommand("formats", "format tuples of the graph representations");
    formats->fallthrough();
    formats->add_option("--which", which, "wp, zeta, phi or all");

    long long T = 20;
    auto *zb = app.add_subcommand("zero-bound", "zero estimate for P(z, wp(z)) with deg P <= T");
    zb->fallthrough();
    zb->add_option("--T", T, "degree bound")->required();

    std::string word, puncture, mlam = "0.3,0.2";
    auto *mono = app.add_subcommand("monodromy", "monodromy of the Betti coordinates");
    mono->fallthrough();
    mono->add_option("--word", word, "word in g1, g2, g3 and inverses");
    mono->add_option("--puncture", puncture, "trace a loop around 0, 1 or lambda");
    mono->add_option("--lambda", mlam, "lambda for --puncture");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    if (g.output_format == "csv")
        g.csv = true;

    std::ofstream file;
    if (!g.out_path.empty()) {
        file.open(g.out_path);
        if (!file) {
            std::cerr << "cannot open " << g.out_path << '\n';
            return usage;
        }
    }
    std::ostream &os = g.out_path.empty() ? std::cout : file;
    os << std::setprecision(17);
    Emitter em(os, g.csv, !g.no_timestamp);
    int code = ok;
    try {
        if (*eval)
            code = cmd_eval(g, em, fn, lam_s, z_s, xi_s, side_s);
        else if (*verify)
            code = cmd_verify(g, em, suite);
        else if (*formats)
            code = cmd_formats(em, which);
        else if (*zb)
            code = cmd_zero_bound(em, T);
        else if (*mono)
            code = cmd_monodromy(g, em, word, mlam, puncture);
    } catch (const Usage &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const error &e) {
        std::cerr << "error[" << errc_name(e.code()) << "]: " << e.what() << '\n';
        em.emit({{"type", "error"}, {"code", errc_name(e.code())}, {"message", e.what()}});
        em.finish();
        return is_numerical(e.code()) ? numerical : usage;
    }
    em.finish();
    return code;
}
