#include "aporbit/orbit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "aporbit/error.hpp"
#include "aporbit/rng.hpp"

namespace aporbit {

OrbitSeries generate_orbit(const MapDefinition& map, const Point& y0, std::size_t horizon) {
    if (y0.dim() != static_cast<std::size_t>(map.dim())) throw DimensionMismatch(map.dim(), y0.dim());
    OrbitSeries orbit;
    orbit.dim = y0.dim();
    orbit.samples.reserve(horizon + 1);
    orbit.samples.push_back(y0);
    for (std::size_t t = 1; t <= horizon; ++t) {
        try {
            orbit.samples.push_back(evaluate(map, orbit.samples.back()));
        } catch (const RangeViolation& e) {
            throw RangeViolation("orbit leaves the box at t=" + std::to_string(t) + ": " + e.what(),
                                 static_cast<long long>(t));
        }
    }
    return orbit;
}

std::vector<GridState> discretize_orbit(const OrbitSeries& orbit, const GridSpec& g) {
    std::vector<GridState> out;
    out.reserve(orbit.samples.size());
    for (const auto& p : orbit.samples) out.push_back(quantize(p, g));
    return out;
}

std::optional<std::size_t> TransitionTable::find(const GridState& s) const {
    const auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

TransitionTable build_transition_table(const std::vector<GridState>& shadow) {
    if (shadow.size() < 2) throw InvalidArgument("transition table needs a shadow of length >= 2");
    TransitionTable table;
    const std::size_t last = shadow.size() - 1;

    // states with an outgoing observation, in order of first appearance
    for (std::size_t t = 0; t < last; ++t) {
        if (table.index.emplace(shadow[t], table.states.size()).second) {
            table.states.push_back(shadow[t]);
            table.first_seen.push_back(t);
        }
    }
    if (!table.index.contains(shadow[last])) table.terminal = shadow[last];

    auto id_of = [&](const GridState& s) {
        const auto it = table.index.find(s);
        return it == table.index.end() ? TransitionTable::kTerminal : it->second;
    };

    table.next.assign(table.states.size(), TransitionTable::kTerminal);
    std::vector<bool> assigned(table.states.size(), false);
    for (std::size_t t = 0; t < last; ++t) {
        const std::size_t n = table.index.at(shadow[t]);
        const std::size_t succ = id_of(shadow[t + 1]);
        if (!assigned[n]) {
            table.next[n] = succ;
            assigned[n] = true;
        } else if (table.next[n] != succ) {
            table.conflicts.push_back({n, t, shadow[t + 1]});
        }
    }
    return table;
}

const GridState& ChainResult::state_at(std::size_t t) const {
    if (t < walk.size()) return walk[t];
    return walk[pre_period + (t - pre_period) % period];
}

std::vector<std::size_t> iterate_chain(const TransitionTable& table, std::size_t initial,
                                       std::size_t horizon) {
    if (initial >= table.size()) throw InvalidArgument("initial state is not in the table");
    std::vector<std::size_t> ids;
    ids.reserve(horizon + 1);
    ids.push_back(initial);
    for (std::size_t t = 1; t <= horizon; ++t) {
        const std::size_t cur = ids.back();
        if (cur == TransitionTable::kTerminal) {
            throw DanglingState("chain reaches a state without an observed successor at t=" +
                                    std::to_string(t - 1),
                                static_cast<long long>(t - 1));
        }
        ids.push_back(table.next[cur]);
    }
    return ids;
}

Cycle chain_cycle(const TransitionTable& table, std::size_t initial,
                  std::vector<std::size_t>* walk) {
    if (initial >= table.size()) throw InvalidArgument("initial state is not in the table");
    std::vector<std::size_t> visit(table.size(), TransitionTable::kTerminal);
    std::vector<std::size_t> local;
    std::vector<std::size_t>& path = walk != nullptr ? *walk : local;
    path.clear();
    std::size_t cur = initial;
    for (std::size_t t = 0;; ++t) {
        if (cur == TransitionTable::kTerminal) {
            throw DanglingState("chain reaches a state without an observed successor at t=" +
                                    std::to_string(t),
                                static_cast<long long>(t));
        }
        if (visit[cur] != TransitionTable::kTerminal) return Cycle{visit[cur], t - visit[cur]};
        visit[cur] = t;
        path.push_back(cur);
        cur = table.next[cur];
    }
}

ChainResult build_chain(const TransitionTable& table, const GridState& initial,
                        std::size_t horizon, const GridSpec& grid) {
    const auto start = table.find(initial);
    if (!start) throw InvalidArgument("initial state is not in the transition table");

    std::vector<std::size_t> walk;
    const Cycle cycle = chain_cycle(table, *start, &walk);

    ChainResult r{grid, {}, {}, cycle.pre_period, cycle.period, table.size(), table.conflicts.size()};
    r.walk.reserve(walk.size());
    for (std::size_t id : walk) r.walk.push_back(table.states[id]);
    r.y_star.reserve(horizon + 1);
    for (std::size_t t = 0; t <= horizon; ++t) r.y_star.push_back(r.state_at(t));
    return r;
}

PipelineResult run_pipeline(const MapDefinition& map, const Point& y0, const GridSpec& grid,
                            std::size_t horizon) {
    if (horizon < 1) throw InvalidArgument("pipeline horizon must be >= 1");
    if (grid.d() != map.dim()) throw DimensionMismatch(map.dim(), grid.d());
    PipelineResult r;
    r.orbit = generate_orbit(map, y0, horizon);
    r.shadow = discretize_orbit(r.orbit, grid);
    r.table = build_transition_table(r.shadow);
    try {
        r.chain_ids = iterate_chain(r.table, 0, horizon);
    } catch (const DanglingState& e) {
        r.dangling_reason = e.what();
        return r;
    }
    try {
        r.chain = build_chain(r.table, r.shadow.front(), horizon, grid);
    } catch (const DanglingState& e) {
        r.dangling_reason = std::string("cycle not certified: ") + e.what();
    }
    return r;
}

std::size_t default_horizon(const GridSpec& grid) {
    constexpr std::uint64_t cap = 10'000'000;
    const std::uint64_t n = grid.state_count();
    return static_cast<std::size_t>(n > cap / 10 ? cap : 10 * n);
}

namespace {

CensusSample census_random_map(int d, int K, std::uint64_t seed) {
    Rng rng(seed);
    const auto axis = static_cast<std::uint64_t>(K) + 1;
    std::unordered_map<GridState, int, GridStateHash> image;

    GridState s;
    s.indices.resize(static_cast<std::size_t>(d));
    for (auto& v : s.indices) v = static_cast<int>(rng.below(axis));

    // iterate the discrete map until the shadow revisits a state
    std::vector<GridState> shadow{s};
    std::unordered_map<GridState, std::size_t, GridStateHash> seen{{s, 0}};
    for (;;) {
        const auto [it, fresh] = image.try_emplace(s, 0);
        if (fresh) it->second = static_cast<int>(rng.below(axis));
        GridState nxt;
        nxt.indices.reserve(s.indices.size());
        nxt.indices.push_back(it->second);
        nxt.indices.insert(nxt.indices.end(), s.indices.begin(), s.indices.end() - 1);
        shadow.push_back(nxt);
        s = std::move(nxt);
        if (!seen.emplace(s, shadow.size() - 1).second) break;
    }

    const TransitionTable table = build_transition_table(shadow);
    const Cycle c = chain_cycle(table, 0);
    return {0, c.pre_period, c.period, true};
}

CensusSample census_random_ar(int d, int K, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> weights(static_cast<std::size_t>(d));
    double total = 0.0;
    for (auto& w : weights) {
        w = -std::log(1.0 - rng.uniform());
        total += w;
    }
    const double radius = 1.0 - rng.uniform();  // (0, 1]
    std::vector<double> p(weights.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        p[i] = sign * radius * weights[i] / total;
    }
    std::vector<double> y0(static_cast<std::size_t>(d));
    for (auto& v : y0) v = rng.uniform(-1.0, 1.0);

    const GridSpec grid(K, d);
    const PipelineResult r = run_pipeline(MapDefinition::ar(std::move(p)), Point(std::move(y0)),
                                          grid, default_horizon(grid));
    if (!r.chain) return {0, 0, 0, false};
    return {0, r.chain->pre_period, r.chain->period, true};
}

}  // namespace

CensusReport period_census(int d, int K, std::size_t ensemble, std::uint64_t seed,
                           CensusGenerator generator, unsigned threads) {
    if (d < 1) throw InvalidArgument("census dimension must be >= 1");
    if (ensemble < 1) throw InvalidArgument("census ensemble must be >= 1");
    if (K < 0 || (generator == CensusGenerator::RandomAr && K < 1)) {
        throw InvalidArgument("census resolution K out of range");
    }

    CensusReport rep;
    rep.K = K;
    rep.d = d;
    rep.ensemble = ensemble;
    rep.seed = seed;
    rep.generator = generator;
    rep.samples.resize(ensemble);
    {
        std::uint64_t n = 1;
        const auto axis = static_cast<std::uint64_t>(K) + 1;
        for (int i = 0; i < d; ++i) n = n > UINT64_MAX / axis ? UINT64_MAX : n * axis;
        rep.state_count = n;
    }

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= ensemble) return;
            try {
                const std::uint64_t s = splitmix64(seed ^ splitmix64(i));
                CensusSample sample = generator == CensusGenerator::RandomMap
                                          ? census_random_map(d, K, s)
                                          : census_random_ar(d, K, s);
                sample.id = i;
                rep.samples[i] = sample;
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::max(1U, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::size_t> periods;
    for (const auto& s : rep.samples) {
        if (!s.resolved) {
            ++rep.unresolved;
            continue;
        }
        periods.push_back(s.period);
        ++rep.histogram[s.period];
    }
    if (!periods.empty()) {
        std::sort(periods.begin(), periods.end());
        double sum = 0.0;
        for (auto L : periods) sum += static_cast<double>(L);
        rep.mean_period = sum / static_cast<double>(periods.size());
        const std::size_t m = periods.size() / 2;
        rep.median_period = periods.size() % 2 == 1
                                ? static_cast<double>(periods[m])
                                : 0.5 * static_cast<double>(periods[m - 1] + periods[m]);
        rep.max_period = periods.back();
    }
    return rep;
}

}  // namespace aporbit
