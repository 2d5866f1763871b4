#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aporbit/analysis.hpp"
#include "aporbit/armodel.hpp"
#include "aporbit/core.hpp"
#include "aporbit/error.hpp"
#include "aporbit/maps.hpp"
#include "aporbit/orbit.hpp"
#include "aporbit/spectral.hpp"

namespace py = pybind11;
using namespace aporbit;

namespace {

std::vector<std::vector<int>> indices(const std::vector<GridState>& states) {
    std::vector<std::vector<int>> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.indices);
    return out;
}

const char* kind_name(TermKind k) {
    switch (k) {
        case TermKind::AlmostPeriodic: return "almost_periodic";
        case TermKind::Decaying: return "decaying";
        case TermKind::Transient: return "transient";
        case TermKind::Growing: return "growing";
    }
    return "";
}

py::dict chain_dict(const ChainResult& c) {
    py::dict d;
    d["pre_period"] = c.pre_period;
    d["period"] = c.period;
    d["table_size"] = c.table_size;
    d["conflicts"] = c.conflict_count;
    d["y_star"] = indices(c.y_star);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grid-shadow chains, trigonometric forms and AR decompositions.";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<RefusedUnbounded>(m, "RefusedUnbounded", error.ptr());

    py::class_<MapDefinition>(m, "Map")
        .def_static("ar", &MapDefinition::ar, py::arg("p"))
        .def_static("delay", &MapDefinition::delay, py::arg("update"), py::arg("d"))
        .def_static("expression", &MapDefinition::expression, py::arg("coords"))
        .def_static("builtin", &MapDefinition::builtin, py::arg("name"),
                    py::arg("params") = std::vector<double>{}, py::arg("d") = 1)
        .def_property_readonly("dim", &MapDefinition::dim)
        .def_property_readonly("kind", &MapDefinition::kind_name)
        .def("__call__", [](const MapDefinition& map, const std::vector<double>& x) {
            const Point out = evaluate(map, Point(x));
            return std::vector<double>(out.coords().begin(), out.coords().end());
        });

    m.def("quantize", [](const std::vector<double>& x, int K) {
        return quantize(Point(x), GridSpec(K, static_cast<int>(x.size()))).indices;
    }, py::arg("x"), py::arg("K"), "Nearest-node indices; midpoints go to the larger node.");
    m.def("node", [](int k, int K) { return GridSpec(K, 1).node(k); }, py::arg("k"), py::arg("K"));
    m.def("quantization_error", [](const std::vector<double>& x, int K) {
        return quantization_error(Point(x), GridSpec(K, static_cast<int>(x.size())));
    }, py::arg("x"), py::arg("K"));

    m.def("orbit", [](const MapDefinition& map, const std::vector<double>& y0, std::size_t horizon) {
        const auto o = generate_orbit(map, Point(y0), horizon);
        std::vector<std::vector<double>> out;
        for (const auto& p : o.samples) out.emplace_back(p.coords().begin(), p.coords().end());
        return out;
    }, py::arg("map"), py::arg("y0"), py::arg("horizon"));

    m.def("run_pipeline", [](const MapDefinition& map, const std::vector<double>& y0, int K,
                             std::size_t horizon) {
        const auto r = run_pipeline(map, Point(y0), GridSpec(K, map.dim()), horizon);
        py::dict d;
        d["shadow"] = indices(r.shadow);
        d["states"] = r.table.size();
        d["conflicts"] = r.table.conflicts.size();
        d["chain"] = r.chain ? py::object(chain_dict(*r.chain)) : py::none();
        d["dangling_reason"] = r.dangling_reason;
        return d;
    }, py::arg("map"), py::arg("y0"), py::arg("K"), py::arg("horizon"));

    m.def("bound", &error_bound, py::arg("t"), py::arg("gamma"), py::arg("d"), py::arg("K"),
          "(2 sum_{s<=t} gamma^s + 1) sqrt(d)/K.");

    m.def("verify_bound", [](const MapDefinition& map, const std::vector<double>& y0, int K,
                             std::size_t horizon, std::optional<double> gamma) {
        VerifyOptions opts;
        opts.gamma = gamma;
        const auto r = verify_error_bound(map, Point(y0), K, horizon, opts);
        py::dict d;
        d["pass"] = r.pass;
        d["gamma"] = r.gamma;
        d["gamma_method"] = r.gamma_method == LipschitzMode::Analytic ? "analytic" : "sampled";
        d["violations"] = r.violations;
        d["worst_ratio"] = r.worst_ratio;
        d["conflicts"] = r.conflicts;
        d["actual"] = r.actual;
        d["bound"] = r.bound;
        return d;
    }, py::arg("map"), py::arg("y0"), py::arg("K"), py::arg("horizon"),
       py::arg("gamma") = py::none());

    py::class_<TrigForm>(m, "TrigForm")
        .def_readonly("period", &TrigForm::period)
        .def_readonly("phase_origin", &TrigForm::phase_origin)
        .def_readonly("harmonics", &TrigForm::harmonics)
        .def_readonly("a", &TrigForm::a)
        .def_readonly("b", &TrigForm::b)
        .def("__call__", &eval_trig, py::arg("t"))
        .def("energy", &parseval_energy, py::arg("coord") = 0);
    m.def("fit_trig", py::overload_cast<const std::vector<std::vector<double>>&, std::size_t>(&fit_trig),
          py::arg("values"), py::arg("pre_period") = 0,
          "values[s][i] is coordinate i at time pre_period + s over one period.");

    m.def("lcm_periods", &lcm_periods, py::arg("L"), py::arg("Lp"));
    m.def("reselect_T", &reselect_T, py::arg("T"), py::arg("L"));

    py::enum_<Boundedness>(m, "Boundedness")
        .value("bounded", Boundedness::Bounded)
        .value("unbounded", Boundedness::Unbounded);

    m.def("ar_recursion", [](const std::vector<double>& p, const std::vector<double>& z0,
                             std::size_t horizon) { return ar_recursion(ARSpec{p, z0}, horizon); },
          py::arg("p"), py::arg("z0"), py::arg("horizon"));
    m.def("characteristic_roots", [](const std::vector<double>& p) {
        const auto rs = characteristic_roots(ARSpec{p, std::vector<double>(p.size(), 0.0)});
        std::vector<std::pair<cplx, std::size_t>> out;
        for (const auto& c : rs.roots) out.emplace_back(c.mu, c.multiplicity);
        return out;
    }, py::arg("p"), "(root, multiplicity) pairs.");
    m.def("classify", [](const std::vector<double>& p) {
        return classify(characteristic_roots(ARSpec{p, std::vector<double>(p.size(), 0.0)}));
    }, py::arg("p"));
    m.def("decompose", [](const std::vector<double>& p, const std::vector<double>& z0) {
        const ARSpec s{p, z0};
        const auto dec = solve_coefficients(s, characteristic_roots(s));
        py::list terms;
        for (const auto& t : dec.terms) {
            py::dict d;
            d["mu"] = t.mu;
            d["k"] = t.k;
            d["a"] = t.a;
            d["kind"] = kind_name(t.kind);
            terms.append(d);
        }
        return terms;
    }, py::arg("p"), py::arg("z0"), "Closed-form terms a t^k mu^t; refuses unbounded specs.");
    m.def("almost_periodic_part", [](const std::vector<double>& p, const std::vector<double>& z0,
                                     std::size_t horizon) {
        const ARSpec s{p, z0};
        const auto parts = split(solve_coefficients(s, characteristic_roots(s)));
        std::vector<double> out;
        for (std::size_t t = 0; t <= horizon; ++t) out.push_back(parts.ap(static_cast<long long>(t)));
        return out;
    }, py::arg("p"), py::arg("z0"), py::arg("horizon"));

    m.def("period_census", [](int d, int K, std::size_t n, std::uint64_t seed,
                              const std::string& generator, unsigned threads) {
        CensusGenerator g;
        if (generator == "random_map") g = CensusGenerator::RandomMap;
        else if (generator == "random_ar") g = CensusGenerator::RandomAr;
        else throw InvalidArgument("unknown generator: " + generator);
        const auto r = period_census(d, K, n, seed, g, threads);
        py::dict out;
        std::vector<std::size_t> periods;
        for (const auto& s : r.samples) periods.push_back(s.resolved ? s.period : 0);
        out["periods"] = periods;
        out["histogram"] = r.histogram;
        out["mean"] = r.mean_period;
        out["median"] = r.median_period;
        out["max"] = r.max_period;
        out["unresolved"] = r.unresolved;
        out["state_count"] = r.state_count;
        return out;
    }, py::arg("d"), py::arg("K"), py::arg("n"), py::arg("seed") = 0,
       py::arg("generator") = "random_map", py::arg("threads") = 1);
}
