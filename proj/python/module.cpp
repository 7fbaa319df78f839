#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "legendre/abel.hpp"
#include "legendre/errors.hpp"
#include "legendre/modular.hpp"
#include "legendre/pfaffian.hpp"
#include "legendre/verify.hpp"

namespace py = pybind11;
using namespace legendre;

namespace {

py::object to_py(const bigint &v) { return py::module_::import("builtins").attr("int")(v.str()); }

Side side_of(const std::string &s)
{
    if (s == "north")
        return Side::north;
    if (s == "south")
        return Side::south;
    if (s.empty() || s == "interior")
        return Side::interior;
    throw error(errc::invalid_argument, "side must be 'north', 'south' or 'interior'");
}

TheoremFunction which_of(const std::string &w)
{
    if (w == "wp")
        return TheoremFunction::wp;
    if (w == "zeta")
        return TheoremFunction::zeta;
    if (w == "phi")
        return TheoremFunction::phi;
    throw error(errc::invalid_argument, "which must be 'wp', 'zeta' or 'phi'");
}

py::dict periods_dict(const PeriodData &pd)
{
    py::dict d;
    d["lambda"] = pd.lambda;
    d["omega1"] = pd.omega1;
    d["omega2"] = pd.omega2;
    d["omega1_prime"] = pd.omega1_prime;
    d["omega2_prime"] = pd.omega2_prime;
    d["eta1"] = pd.eta1;
    d["eta2"] = pd.eta2;
    d["tau"] = pd.tau;
    d["area"] = pd.area;
    d["route"] = pd.route;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Legendre-family periods, Weierstrass functions, abelian integrals and verification sweeps";

    static py::exception<error> exc(m, "LegendreError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const error &e) {
            exc((std::string(errc_name(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def("compute_periods", [](cplx lam, double tol) { return periods_dict(compute_periods(lam, tol)); },
          py::arg("lam"), py::arg("tol") = 1e-12);

    m.def(
        "reduce_lambda",
        [](cplx lam) {
            ReducedLambda r = reduce_lambda_to_F(lam);
            return py::make_tuple(r.param.lambda, r.orbit_index);
        },
        py::arg("lam"), "S3 image of lambda in F and its orbit index");

    py::class_<Lattice>(m, "Lattice")
        .def(py::init([](cplx lam) { return Lattice(compute_periods(lam)); }), py::arg("lam"))
        .def_property_readonly("omega1", &Lattice::omega1)
        .def_property_readonly("omega2", &Lattice::omega2)
        .def_property_readonly("eta1", &Lattice::eta1)
        .def_property_readonly("eta2", &Lattice::eta2)
        .def_property_readonly("g2", &Lattice::g2)
        .def_property_readonly("g3", &Lattice::g3)
        .def("wp", &Lattice::wp)
        .def("wp_prime", &Lattice::wp_prime)
        .def("zeta", &Lattice::zeta)
        .def("sigma", &Lattice::sigma)
        .def("phi", &Lattice::phi);

    py::class_<AbelMap>(m, "AbelMap")
        .def(py::init<cplx, double>(), py::arg("lam"), py::arg("tol") = 1e-11)
        .def_property_readonly("periods", [](const AbelMap &a) { return periods_dict(a.periods()); })
        .def(
            "z", [](const AbelMap &a, cplx xi, const std::string &side) { return a.z(make_point(a.lambda(), xi, side_of(side))); },
            py::arg("xi"), py::arg("side") = "interior")
        .def(
            "betti",
            [](const AbelMap &a, cplx xi, const std::string &side) {
                BettiCoords b = betti(a, make_point(a.lambda(), xi, side_of(side)));
                return py::make_tuple(b.b1, b.b2);
            },
            py::arg("xi"), py::arg("side") = "interior")
        .def(
            "L", [](const AbelMap &a, cplx xi, const std::string &side) { return log_phi_L(a, make_point(a.lambda(), xi, side_of(side))); },
            py::arg("xi"), py::arg("side") = "interior")
        .def(
            "region", [](const AbelMap &a, cplx xi) { return std::string(region_name(classify_region(a.lambda(), xi))); },
            py::arg("xi"))
        .def(
            "reconstruct_wp", [](const AbelMap &a, cplx z) {
                WpGraphPoint w = reconstruct_wp_graph(a, z);
                py::dict d;
                d["value"] = w.value;
                d["xi"] = w.xi;
                d["region"] = std::string(region_name(w.region));
                d["m"] = w.m;
                d["n"] = w.n;
                d["branch"] = w.branch;
                return d;
            },
            py::arg("z"))
        .def(
            "monodromy_loop", [](const AbelMap &a, int puncture) {
                MonodromyNumeric r = monodromy_numeric(a, standard_loop(a.lambda(), puncture));
                return py::make_tuple(r.element.sign, py::make_tuple(r.element.t1, r.element.t2), r.residual);
            },
            py::arg("puncture"), "numeric monodromy around 0 (0), 1 (1) or lambda (2)");

    m.def(
        "monodromy",
        [](const std::string &word) {
            MonodromyElement e = monodromy_rho(parse_word(word));
            return py::make_tuple(e.sign, py::make_tuple(e.t1, e.t2));
        },
        py::arg("word"));

    m.def(
        "compose_theorem_format",
        [](const std::string &which) {
            PfaffianFormat f = compose_theorem_format(which_of(which));
            return py::make_tuple(f.r, f.alpha, f.beta, f.n, to_py(f.L), f.M);
        },
        py::arg("which"));

    m.def(
        "khovanskii_zero_bound",
        [](long long T) {
            ZeroBound z = khovanskii_zero_bound(compose_theorem_format(TheoremFunction::wp), T);
            return py::make_tuple(to_py(z.value), z.degree_too_small);
        },
        py::arg("T"));

    m.def(
        "domain_change_growth",
        [](cplx lam, long long a, long long b, long long c, long long d, int grid) {
            py::gil_scoped_release release;
            return domain_change_growth(lam, a, b, c, d, grid).count;
        },
        py::arg("lam"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("grid") = 20000);

    m.def(
        "run_suite",
        [](const std::string &suite, long long samples, std::uint64_t seed, int threads, double tol) {
            RunConfig cfg;
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.tol = tol;
            VerificationReport r;
            {
                py::gil_scoped_release release;
                r = run_suite(suite, cfg);
            }
            py::list recs;
            for (const auto &x : r.records) {
                py::dict d, in;
                for (const auto &[k, v] : x.inputs)
                    std::visit([&](const auto &val) { in[py::str(k)] = val; }, v);
                d["check"] = x.check;
                d["inputs"] = in;
                d["value"] = x.value;
                d["bound"] = x.bound;
                d["compare"] = x.cmp == Compare::le ? "le" : "ge";
                d["slack"] = x.slack;
                d["pass"] = x.pass;
                d["error"] = x.error.empty() ? py::object(py::none()) : py::object(py::str(x.error));
                recs.append(d);
            }
            py::dict out;
            out["suite"] = r.suite;
            out["records"] = recs;
            out["max_value"] = r.max_value;
            out["min_slack"] = r.min_slack;
            out["failures"] = r.failures;
            out["pass"] = r.pass;
            out["wall_seconds"] = r.wall_seconds;
            return out;
        },
        py::arg("suite"), py::arg("samples") = 0, py::arg("seed") = 1, py::arg("threads") = 0,
        py::arg("tol") = 1e-11);
}
