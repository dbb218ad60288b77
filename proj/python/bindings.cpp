#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmwb/cli.hpp"
#include "mmwb/fluctuation.hpp"
#include "mmwb/freeenergy.hpp"
#include "mmwb/mapcount.hpp"
#include "mmwb/verify.hpp"

namespace py = pybind11;
using namespace mmwb;

namespace {

// Series as {index tuple: exact coefficient string}.
py::dict series_dict(const Series<Rational>& s) {
    py::dict d;
    if (!s.has_shape()) return d;
    for (std::size_t p = 0; p < s.size(); ++p) {
        if (s[p].is_zero()) continue;
        const auto& k = s.shape()->index(p);
        d[py::tuple(py::cast(k))] = s[p].str();
    }
    return d;
}

py::dict moments(const std::string& potential, const std::vector<std::string>& queries, int order) {
    Potential V = parse_potential(potential);
    SeriesMoments<Rational> mu(V, order);
    py::dict out;
    for (const auto& q : queries) out[py::str(q)] = series_dict(mu.apply(parse_polynomial(q)));
    return out;
}

std::map<int, std::uint64_t> census_of(const std::vector<std::string>& stars) {
    std::vector<Star> s;
    for (const auto& q : stars) s.push_back(star_from_monomial(parse_monomial(q)));
    return census(s).counts;
}

py::dict sigma2(const std::string& potential, const std::string& P, const std::string& Q, int order) {
    Potential V = parse_potential(potential);
    SeriesMoments<Rational> mu(V, order);
    OperatorContext<Rational> ctx(mu);
    return series_dict(ctx.sigma2(ctx.lift(parse_polynomial(P)), ctx.lift(parse_polynomial(Q))));
}

py::dict free_energy_of(const std::string& potential, int order) {
    FreeEnergyReport r = free_energy(parse_potential(potential), order);
    py::dict out;
    out["F0"] = series_dict(r.F0);
    out["F1"] = series_dict(r.F1);
    out["pass"] = r.pass();
    return out;
}

py::tuple cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status;
    {
        py::gil_scoped_release release;
        status = run_cli(args, out, err);
    }
    return py::make_tuple(status, out.str(), err.str());
}

py::dict verify(const std::string& id, std::uint64_t seed) {
    VerifyOptions opt;
    opt.seed = seed;
    CheckResult r;
    {
        py::gil_scoped_release release;
        r = run_criterion(id, opt);
    }
    py::dict d;
    d["id"] = r.id;
    d["pass"] = r.pass;
    d["reproducible"] = r.reproducible;
    d["summary"] = r.summary;
    return d;
}

}  // namespace

PYBIND11_MODULE(_mmwb, m) {
    m.doc() = "Multi-matrix model workbench";
    m.attr("__version__") = kToolVersion;
    m.def("moments", &moments, py::arg("potential"), py::arg("queries"), py::arg("order") = 4,
          "Series coefficients of the limiting moments mu_t(P).");
    m.def("census", &census_of, py::arg("stars"), "Genus census of connected matchings of the given star types.");
    m.def("sigma2", &sigma2, py::arg("potential"), py::arg("P"), py::arg("Q"), py::arg("order") = 3,
          "Series of the limiting covariance sigma^2(P, Q).");
    m.def("free_energy", &free_energy_of, py::arg("potential"), py::arg("order") = 3,
          "F0 and F1 series with the map-count cross-check.");
    m.def("verify", &verify, py::arg("id"), py::arg("seed") = 20240601, "Runs one acceptance criterion.");
    m.def("run_cli", &cli, py::arg("args"), "Runs the command-line tool; returns (status, stdout, stderr).");
}
