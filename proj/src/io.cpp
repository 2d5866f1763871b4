#include "aporbit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "aporbit/error.hpp"

namespace aporbit::io {

namespace {

const char* method_name(LipschitzMode m) { return m == LipschitzMode::Analytic ? "analytic" : "sampled"; }

const char* kind_name(TermKind k) {
    switch (k) {
        case TermKind::AlmostPeriodic: return "almost_periodic";
        case TermKind::Decaying: return "decaying";
        case TermKind::Transient: return "transient";
        case TermKind::Growing: return "growing";
    }
    return "?";
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

MapDefinition map_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("map definition must be a JSON object");
    const auto kind = required<std::string>(j, "kind");
    try {
        MapDefinition map = [&] {
            if (kind == "ar") return MapDefinition::ar(required<std::vector<double>>(j, "p"));
            if (kind == "expr") return MapDefinition::expression(required<std::vector<std::string>>(j, "exprs"));
            if (kind == "delay") {
                const auto exprs = required<std::vector<std::string>>(j, "exprs");
                if (exprs.size() != 1) throw ConfigError("delay map takes exactly one update expression");
                return MapDefinition::delay(exprs[0], required<int>(j, "d"));
            }
            if (kind == "builtin") {
                const auto params = j.contains("params") ? required<std::vector<double>>(j, "params")
                                                         : std::vector<double>{};
                const int d = j.contains("d") ? required<int>(j, "d") : 1;
                return MapDefinition::builtin(required<std::string>(j, "builtin"), params, d);
            }
            throw ConfigError("unknown map kind '" + kind + "'");
        }();
        if (j.contains("d") && required<int>(j, "d") != map.dim()) {
            throw ConfigError("declared d = " + std::to_string(required<int>(j, "d")) +
                              " does not match the map's dimension " + std::to_string(map.dim()));
        }
        if (j.contains("name")) map.name = required<std::string>(j, "name");
        return map;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid map definition: ") + e.what());
    }
}

json map_to_json(const MapDefinition& map) {
    json j{{"d", map.dim()}, {"kind", map.kind_name()}};
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ArKind>) {
                j["p"] = k.p;
            } else if constexpr (std::is_same_v<K, DelayKind>) {
                j["exprs"] = json::array({to_string(k.update)});
            } else if constexpr (std::is_same_v<K, ExpressionKind>) {
                json e = json::array();
                for (const auto& c : k.coords) e.push_back(to_string(c));
                j["exprs"] = e;
            } else {
                j["builtin"] = k.name;
                j["params"] = k.params;
            }
        },
        map.kind());
    if (!map.name.empty()) j["name"] = map.name;
    return j;
}

ARSpec ar_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("AR spec must be a JSON object");
    ARSpec spec{required<std::vector<double>>(j, "p"), required<std::vector<double>>(j, "z0")};
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid AR spec: ") + e.what());
    }
    return spec;
}

json ar_spec_to_json(const ARSpec& spec) { return json{{"p", spec.p}, {"z0", spec.z0}}; }

json to_json(const Point& p) { return json(std::vector<double>(p.coords().begin(), p.coords().end())); }
json to_json(const GridState& s) { return json(s.indices); }
json to_json(const GridSpec& g) { return json{{"K", g.K()}, {"d", g.d()}}; }

json chain_summary(const ChainResult& chain, const TransitionTable& table) {
    return json{{"K", chain.grid.K()},
                {"d", chain.grid.d()},
                {"T", chain.pre_period},
                {"L", chain.period},
                {"N", table.size()},
                {"conflicts", table.conflicts.size()},
                {"shadow_closed", table.shadow_closed()},
                {"state_count", chain.grid.state_count()}};
}

json trig_to_json(const TrigForm& form) {
    return json{{"L", form.period}, {"T", form.phase_origin}, {"M", form.harmonics},
                {"a", form.a},      {"b", form.b}};
}

json bound_to_json(const BoundReport& rep) {
    json closed = json::array();
    for (const auto& c : rep.closed_form) closed.push_back(optional_number(c));
    json j{{"K", rep.K},
           {"d", rep.d},
           {"horizon", rep.horizon},
           {"gamma", rep.gamma},
           {"gamma_method", method_name(rep.gamma_method)},
           {"gamma_caveat", rep.gamma_caveat},
           {"pass", rep.pass},
           {"violations", rep.violations},
           {"worst_ratio", rep.worst_ratio},
           {"worst_t", rep.worst_t},
           {"conflicts", rep.conflicts},
           {"shadow_closed", rep.shadow_closed},
           {"actual", rep.actual},
           {"bound", rep.bound},
           {"closed_form", closed}};
    if (rep.cycle) {
        j["T"] = rep.cycle->pre_period;
        j["L"] = rep.cycle->period;
    }
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

json ladder_to_json(const TailReport& tail, const ConditionReport& cond, double gamma,
                    LipschitzMode gamma_method) {
    return json{{"K", tail.plan.K},
                {"T", tail.plan.T},
                {"L", tail.plan.L},
                {"T_selected", tail.plan.T_sel},
                {"lcm", tail.plan.lcm},
                {"conflicts", tail.conflicts},
                {"gamma", gamma},
                {"gamma_method", method_name(gamma_method)},
                {"condition",
                 {{"terms", cond.terms},
                  {"partial_sums", cond.partial_sums},
                  {"ratios", cond.ratios},
                  {"budget", cond.budget},
                  {"below_budget", cond.below_budget},
                  {"verdict", cond.verdict}}},
                {"tail",
                 {{"chain_sups", tail.chain_sups},
                  {"shadow_sups", tail.shadow_sups},
                  {"tolerance", tail.tolerance},
                  {"consistent", tail.consistent},
                  {"verdict", tail.verdict}}}};
}

json decomposition_to_json(const ARDecomposition& dec, const DecompositionCheck& check) {
    json roots = json::array();
    for (const auto& r : dec.roots.roots) {
        roots.push_back({{"re", r.mu.real()},
                         {"im", r.mu.imag()},
                         {"multiplicity", r.multiplicity},
                         {"modulus_gap", std::abs(std::abs(r.mu) - 1.0)}});
    }
    json terms = json::array();
    for (const auto& t : dec.terms) {
        terms.push_back({{"mu", complex_json(t.mu)}, {"k", t.k}, {"a", complex_json(t.a)}, {"kind", kind_name(t.kind)}});
    }
    return json{{"roots", roots},
                {"root_residual", dec.roots.residual},
                {"terms", terms},
                {"classification", dec.classification == Boundedness::Bounded ? "bounded" : "unbounded"},
                {"condition", dec.condition},
                {"solve_residual", dec.solve_residual},
                {"check",
                 {{"horizon", check.horizon},
                  {"max_closed_error", check.max_closed_error},
                  {"max_imaginary", check.max_imaginary},
                  {"rho", check.rho},
                  {"envelope_C", check.envelope_C},
                  {"max_envelope_ratio", check.max_envelope_ratio},
                  {"envelope_ok", check.envelope_ok},
                  {"tail_gap", check.tail_gap},
                  {"box_violated", check.box_violated || dec.box_violated}}}};
}

json census_to_json(const CensusReport& rep) {
    json hist = json::array();
    for (const auto& [L, count] : rep.histogram) hist.push_back({{"L", L}, {"count", count}});
    return json{{"K", rep.K},
                {"d", rep.d},
                {"ensemble", rep.ensemble},
                {"generator", rep.generator == CensusGenerator::RandomMap ? "random_map" : "random_ar"},
                {"state_count", rep.state_count},
                {"histogram", hist},
                {"mean_L", rep.mean_period},
                {"median_L", rep.median_period},
                {"max_L", rep.max_period},
                {"unresolved", rep.unresolved}};
}

json range_to_json(const RangeReport& rep) {
    json j{{"pass", rep.pass},
           {"max_overshoot", rep.max_overshoot},
           {"evaluated", rep.evaluated},
           {"worst_point", rep.worst_point}};
    if (!rep.error.empty()) j["error"] = rep.error;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string orbit_csv(const PipelineResult& run, const GridSpec& grid) {
    std::ostringstream out;
    const std::size_t d = run.orbit.dim;
    out << 't';
    for (const char* prefix : {"y_", "ybar_", "ystar_"}) {
        for (std::size_t i = 1; i <= d; ++i) out << ',' << prefix << i;
    }
    out << '\n';
    for (std::size_t t = 0; t < run.orbit.samples.size(); ++t) {
        out << t;
        for (double v : run.orbit.samples[t].coords()) out << ',' << format_double(v);
        for (int k : run.shadow[t].indices) out << ',' << format_double(grid.node(k));
        if (t < run.chain_ids.size()) {
            for (int k : run.table.states[run.chain_ids[t]].indices) out << ',' << format_double(grid.node(k));
        } else {
            for (std::size_t i = 0; i < d; ++i) out << ',';
        }
        out << '\n';
    }
    return out.str();
}

std::string bound_csv(const BoundReport& rep) {
    std::ostringstream out;
    out << "t,actual,bound\n";
    for (std::size_t t = 0; t < rep.actual.size(); ++t) {
        out << t << ',' << format_double(rep.actual[t]) << ',' << format_double(rep.bound[t]) << '\n';
    }
    return out.str();
}

std::string trig_curve_csv(const TrigForm& form, long long t_begin, long long t_end) {
    std::ostringstream out;
    out << 't';
    for (std::size_t i = 1; i <= form.dim; ++i) out << ",eval_" << i;
    out << '\n';
    for (long long t = t_begin; t <= t_end; ++t) {
        out << t;
        for (double v : eval_trig(form, t)) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

std::string ar_curve_csv(const ARSpec& spec, const ARDecomposition& dec, std::size_t horizon) {
    const std::vector<double> z = ar_recursion(spec, horizon);
    const SplitResult parts = split(dec);
    std::ostringstream out;
    out << "t,z,ap,R\n";
    for (std::size_t t = 0; t <= horizon; ++t) {
        const auto tt = static_cast<long long>(t);
        out << t << ',' << format_double(z[t]) << ',' << format_double(parts.ap(tt)) << ','
            << format_double(parts.remainder(tt) + parts.transient(tt)) << '\n';
    }
    return out.str();
}

std::string census_csv(const CensusReport& rep) {
    std::ostringstream out;
    out << "sample_id,T,L\n";
    for (const auto& s : rep.samples) {
        out << s.id << ',';
        if (s.resolved) {
            out << s.pre_period << ',' << s.period;
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

OutputDir::OutputDir(std::filesystem::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

void OutputDir::check_writable(const std::string& name) const {
    const auto path = dir_ / name;
    if (!force_ && std::filesystem::exists(path)) {
        throw ConfigError("'" + path.string() + "' exists; pass --force to overwrite");
    }
}

std::filesystem::path OutputDir::write(const std::string& name, const std::string& content) const {
    check_writable(name);
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
    return path;
}

std::filesystem::path OutputDir::write_json(const std::string& name, const json& j) const {
    return write(name, j.dump(2) + "\n");
}

}  // namespace aporbit::io
