#include "aporbit/cli.hpp"

#include <CLI11.hpp>
#include <limits>
#include <ostream>
#include <sstream>

#include "aporbit/analysis.hpp"
#include "aporbit/armodel.hpp"
#include "aporbit/error.hpp"
#include "aporbit/io.hpp"
#include "aporbit/orbit.hpp"
#include "aporbit/spectral.hpp"

namespace aporbit::cli {

namespace {

using io::json;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string out = ".";
    bool force = false;
    bool json_only = false;
};

struct MapOptions {
    std::string file;
    std::string ar;
    std::vector<std::string> exprs;
    std::string y0;
};

// Runs `f`, turning library errors raised while interpreting user input
// into ConfigError (exit code 3).
template <typename F>
auto as_config(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
    }
    if (values.empty()) throw ConfigError(std::string(what) + " is empty");
    return values;
}

void add_map_options(CLI::App* cmd, MapOptions& m, bool with_y0 = true) {
    cmd->add_option("--map", m.file, "Map definition file (JSON)");
    cmd->add_option("--ar", m.ar, "Inline AR coefficients p_1,...,p_d");
    cmd->add_option("--expr", m.exprs, "Inline coordinate expression (repeat once per coordinate)");
    if (with_y0) cmd->add_option("--y0", m.y0, "Initial point, comma separated")->required();
}

MapDefinition load_map(const MapOptions& m) {
    const int given = !m.file.empty() + !m.ar.empty() + !m.exprs.empty();
    if (given != 1) throw ConfigError("give exactly one of --map, --ar, --expr");
    return as_config([&] {
        if (!m.file.empty()) return io::map_from_json(io::read_json_file(m.file));
        if (!m.ar.empty()) return MapDefinition::ar(parse_list(m.ar, "--ar"));
        return MapDefinition::expression(m.exprs);
    });
}

Point load_point(const std::string& text, const MapDefinition& map) {
    std::vector<double> c = parse_list(text, "--y0");
    if (static_cast<int>(c.size()) != map.dim()) {
        throw ConfigError("--y0 has " + std::to_string(c.size()) + " coordinates, map dimension is " +
                          std::to_string(map.dim()));
    }
    return as_config([&] { return Point(std::move(c)); });
}

json base_config(const std::string& command, const GlobalOptions& g) {
    return json{{"command", command}, {"seed", g.seed}, {"out", g.out}, {"force", g.force}, {"json_only", g.json_only}};
}

json envelope(const json& config, json payload) {
    json j{{"schema_version", io::kSchemaVersion}, {"config", config}};
    for (auto& [k, v] : payload.items()) j[k] = std::move(v);
    return j;
}

std::vector<int> parse_ks(const std::string& text) {
    std::vector<int> ks;
    for (double v : parse_list(text, "--Ks")) {
        if (v != static_cast<int>(v)) throw ConfigError("--Ks entries must be integers");
        ks.push_back(static_cast<int>(v));
    }
    return ks;
}

// ---- commands -------------------------------------------------------------

struct RunOptions {
    MapOptions map;
    int K = 0;
    std::size_t horizon = 0;
    bool emit_curve = false;
};

int cmd_run(const GlobalOptions& g, const RunOptions& o, std::ostream& out) {
    const MapDefinition map = load_map(o.map);
    const Point y0 = load_point(o.map.y0, map);
    const GridSpec grid = as_config([&] { return GridSpec(o.K, map.dim()); });
    const std::size_t horizon = o.horizon > 0 ? o.horizon : default_horizon(grid);
    const io::OutputDir dir(g.out, g.force);
    std::vector<std::string> targets{"chain.json", "trig.json"};
    if (!g.json_only) targets.emplace_back("orbit.csv");
    if (o.emit_curve && !g.json_only) targets.emplace_back("curve.csv");
    for (const auto& t : targets) dir.check_writable(t);

    json config = base_config("run", g);
    config["map"] = io::map_to_json(map);
    config["y0"] = io::to_json(y0);
    config["K"] = o.K;
    config["horizon"] = horizon;

    const PipelineResult run = run_pipeline(map, y0, grid, horizon);
    if (!g.json_only) dir.write("orbit.csv", io::orbit_csv(run, grid));
    if (!run.chain) throw DanglingState(run.dangling_reason, -1);

    const TrigForm form = fit_trig(*run.chain);
    dir.write_json("chain.json", envelope(config, io::chain_summary(*run.chain, run.table)));
    dir.write_json("trig.json", envelope(config, io::trig_to_json(form)));
    if (o.emit_curve && !g.json_only) {
        const auto T = static_cast<long long>(form.phase_origin);
        dir.write("curve.csv", io::trig_curve_csv(form, T, T + 3 * static_cast<long long>(form.period)));
    }
    out << "K=" << o.K << " d=" << map.dim() << " T=" << run.chain->pre_period << " L=" << run.chain->period
        << " N=" << run.table.size() << " conflicts=" << run.table.conflicts.size() << '\n';
    return kExitOk;
}

struct VerifyCmdOptions {
    MapOptions map;
    int K = 0;
    std::size_t horizon = 200;
    double gamma = 0.0;
    std::size_t samples = 20000;
};

int cmd_verify(const GlobalOptions& g, const VerifyCmdOptions& o, std::ostream& out) {
    const MapDefinition map = load_map(o.map);
    const Point y0 = load_point(o.map.y0, map);
    as_config([&] { return GridSpec(o.K, map.dim()); });
    const io::OutputDir dir(g.out, g.force);
    dir.check_writable("bound.json");
    if (!g.json_only) dir.check_writable("bound.csv");

    VerifyOptions vo;
    vo.seed = g.seed;
    vo.lipschitz_samples = o.samples;
    if (o.gamma > 0.0) vo.gamma = o.gamma;

    json config = base_config("verify", g);
    config["map"] = io::map_to_json(map);
    config["y0"] = io::to_json(y0);
    config["K"] = o.K;
    config["horizon"] = o.horizon;
    config["lipschitz_samples"] = o.samples;
    if (vo.gamma) config["gamma"] = *vo.gamma;

    const BoundReport rep = verify_error_bound(map, y0, o.K, o.horizon, vo);
    dir.write_json("bound.json", envelope(config, io::bound_to_json(rep)));
    if (!g.json_only) dir.write("bound.csv", io::bound_csv(rep));
    out << (rep.pass ? "pass" : "FAIL") << ": gamma=" << rep.gamma << " worst_ratio=" << rep.worst_ratio
        << " violations=" << rep.violations << " conflicts=" << rep.conflicts << '\n';
    if (rep.gamma_caveat) out << "note: " << rep.note << '\n';
    return kExitOk;
}

struct LadderOptions {
    MapOptions map;
    std::string ks;
    std::size_t horizon = 0;
    double budget = std::numeric_limits<double>::infinity();
    double tolerance = 1e-6;
    double gamma = 0.0;
};

int cmd_ladder(const GlobalOptions& g, const LadderOptions& o, std::ostream& out) {
    const MapDefinition map = load_map(o.map);
    const Point y0 = load_point(o.map.y0, map);
    const std::vector<int> ks = parse_ks(o.ks);
    std::size_t horizon = o.horizon;
    as_config([&] {
        for (int K : ks) {
            const GridSpec grid(K, map.dim());
            if (o.horizon == 0) horizon = std::max(horizon, default_horizon(grid));
        }
        for (std::size_t j = 1; j < ks.size(); ++j) {
            if (ks[j] <= ks[j - 1]) throw ConfigError("--Ks must increase strictly");
        }
        return 0;
    });
    const io::OutputDir dir(g.out, g.force);
    dir.check_writable("ladder.json");

    VerifyOptions vo;
    vo.seed = g.seed;
    if (o.gamma > 0.0) vo.gamma = o.gamma;
    const LipschitzEstimate gamma = resolve_gamma(map, vo);
    const TailReport tail = tail_convergence(map, y0, ks, horizon, o.tolerance);
    const ConditionReport cond = check_convergence_condition(tail.plan, gamma.gamma, o.budget);

    json config = base_config("ladder", g);
    config["map"] = io::map_to_json(map);
    config["y0"] = io::to_json(y0);
    config["Ks"] = ks;
    config["horizon"] = horizon;
    config["budget"] = o.budget;
    config["tolerance"] = o.tolerance;
    dir.write_json("ladder.json", envelope(config, io::ladder_to_json(tail, cond, gamma.gamma, gamma.method)));
    out << cond.verdict << '\n' << tail.verdict << '\n';
    return kExitOk;
}

struct ArOptions {
    std::string spec;
    std::size_t horizon = 200;
};

int cmd_ar(const GlobalOptions& g, const ArOptions& o, std::ostream& out, std::ostream& err) {
    const ARSpec spec = io::ar_spec_from_json(io::read_json_file(o.spec));
    const io::OutputDir dir(g.out, g.force);
    dir.check_writable("decomposition.json");
    if (!g.json_only) dir.check_writable("ar_curve.csv");

    json config = base_config("ar", g);
    config["spec"] = io::ar_spec_to_json(spec);
    config["horizon"] = o.horizon;

    const RootSet roots = characteristic_roots(spec);
    if (classify(roots) == Boundedness::Unbounded) {
        json roots_json = json::array();
        for (const auto& r : roots.roots) {
            roots_json.push_back({{"re", r.mu.real()}, {"im", r.mu.imag()}, {"multiplicity", r.multiplicity}});
        }
        dir.write_json("decomposition.json",
                       envelope(config, json{{"roots", roots_json},
                                             {"classification", "unbounded"},
                                             {"refused", true}}));
        err << "error: AR spec is unbounded; decomposition refused\n";
        return kExitRuntime;
    }
    const ARDecomposition dec = solve_coefficients(spec, roots);
    const DecompositionCheck check = verify_decomposition(spec, dec, o.horizon);
    dir.write_json("decomposition.json", envelope(config, io::decomposition_to_json(dec, check)));
    if (!g.json_only) dir.write("ar_curve.csv", io::ar_curve_csv(spec, dec, o.horizon));
    out << "bounded: " << dec.terms.size() << " terms, max closed-form error " << check.max_closed_error
        << ", |z-ap| at t=" << o.horizon << ": " << check.tail_gap << '\n';
    return kExitOk;
}

struct CensusOptions {
    int d = 0;
    int K = 0;
    std::size_t n = 0;
    std::string generator = "random_map";
    unsigned threads = 1;
};

int cmd_census(const GlobalOptions& g, const CensusOptions& o, std::ostream& out) {
    CensusGenerator gen{};
    if (o.generator == "random_map") {
        gen = CensusGenerator::RandomMap;
    } else if (o.generator == "random_ar") {
        gen = CensusGenerator::RandomAr;
    } else {
        throw ConfigError("--generator must be random_map or random_ar");
    }
    if (o.d < 1 || o.n < 1 || o.K < 0 || (gen == CensusGenerator::RandomAr && o.K < 1)) {
        throw ConfigError("census needs d >= 1, n >= 1 and K >= 0 (K >= 1 for random_ar)");
    }
    const io::OutputDir dir(g.out, g.force);
    dir.check_writable("census.json");
    if (!g.json_only) dir.check_writable("census.csv");

    const CensusReport rep = period_census(o.d, o.K, o.n, g.seed, gen, o.threads);
    json config = base_config("census", g);
    config["d"] = o.d;
    config["K"] = o.K;
    config["n"] = o.n;
    config["generator"] = o.generator;
    dir.write_json("census.json", envelope(config, io::census_to_json(rep)));
    if (!g.json_only) dir.write("census.csv", io::census_csv(rep));
    out << "mean L=" << rep.mean_period << " median L=" << rep.median_period << " max L=" << rep.max_period
        << " of (K+1)^d=" << rep.state_count << '\n';
    return kExitOk;
}

struct ValidateOptions {
    MapOptions map;
    std::size_t samples = 1000;
};

int cmd_validate(const GlobalOptions& g, const ValidateOptions& o, std::ostream& out) {
    const MapDefinition map = load_map(o.map);
    const io::OutputDir dir(g.out, g.force);
    dir.check_writable("validate.json");
    const RangeReport rep = validate_range(map, o.samples, g.seed);
    json config = base_config("validate-map", g);
    config["map"] = io::map_to_json(map);
    config["samples"] = o.samples;
    dir.write_json("validate.json", envelope(config, io::range_to_json(rep)));
    out << (rep.pass ? "pass" : "FAIL") << ": max overshoot " << rep.max_overshoot << '\n';
    return rep.pass ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-state periodic approximation of orbits of self-maps of [-1,1]^d", "aporbit"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for every stochastic choice");
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--force", g.force, "Overwrite existing output files");
    app.add_flag("--json-only", g.json_only, "Skip CSV outputs");

    RunOptions run_o;
    auto* run_cmd = app.add_subcommand("run", "Orbit, shadow, chain and sinusoid form at one resolution");
    add_map_options(run_cmd, run_o.map);
    run_cmd->add_option("--K", run_o.K, "Grid resolution")->required();
    run_cmd->add_option("--horizon", run_o.horizon, "Orbit horizon (default 10 (K+1)^d, capped at 1e7)");
    run_cmd->add_flag("--emit-curve", run_o.emit_curve, "Write curve.csv from the sinusoid form");

    VerifyCmdOptions ver_o;
    auto* ver_cmd = app.add_subcommand("verify", "Check the approximation error bound along the orbit");
    add_map_options(ver_cmd, ver_o.map);
    ver_cmd->add_option("--K", ver_o.K, "Grid resolution")->required();
    ver_cmd->add_option("--horizon", ver_o.horizon, "Orbit horizon");
    ver_cmd->add_option("--gamma", ver_o.gamma, "Lipschitz constant override");
    ver_cmd->add_option("--samples", ver_o.samples, "Pairs for the sampled Lipschitz estimate");

    LadderOptions lad_o;
    auto* lad_cmd = app.add_subcommand("ladder", "Resolution ladder diagnostics");
    add_map_options(lad_cmd, lad_o.map);
    lad_cmd->add_option("--Ks", lad_o.ks, "Increasing resolutions, comma separated")->required();
    lad_cmd->add_option("--horizon", lad_o.horizon, "Orbit horizon (default from the largest K)");
    lad_cmd->add_option("--budget", lad_o.budget, "Budget C* for the partial sums");
    lad_cmd->add_option("--tol", lad_o.tolerance, "Tolerance for the tail verdict");
    lad_cmd->add_option("--gamma", lad_o.gamma, "Lipschitz constant override");

    ArOptions ar_o;
    auto* ar_cmd = app.add_subcommand("ar", "Almost periodic / decaying split of an AR recursion");
    ar_cmd->add_option("--spec", ar_o.spec, "AR spec file (JSON)")->required();
    ar_cmd->add_option("--horizon", ar_o.horizon, "Horizon for checks and curves");

    CensusOptions cen_o;
    auto* cen_cmd = app.add_subcommand("census", "Period statistics over random delay maps");
    cen_cmd->add_option("--d", cen_o.d, "Dimension")->required();
    cen_cmd->add_option("--K", cen_o.K, "Grid resolution")->required();
    cen_cmd->add_option("--n", cen_o.n, "Ensemble size")->required();
    cen_cmd->add_option("--generator", cen_o.generator, "random_map or random_ar");
    cen_cmd->add_option("--threads", cen_o.threads, "Worker threads");

    ValidateOptions val_o;
    auto* val_cmd = app.add_subcommand("validate-map", "Probe a map for range violations");
    add_map_options(val_cmd, val_o.map, false);
    val_cmd->add_option("--samples", val_o.samples, "Quasi-random probe points");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_run(g, run_o, out);
        if (*ver_cmd) return cmd_verify(g, ver_o, out);
        if (*lad_cmd) return cmd_ladder(g, lad_o, out);
        if (*ar_cmd) return cmd_ar(g, ar_o, out, err);
        if (*cen_cmd) return cmd_census(g, cen_o, out);
        if (*val_cmd) return cmd_validate(g, val_o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace aporbit::cli
