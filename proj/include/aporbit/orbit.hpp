#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aporbit/core.hpp"
#include "aporbit/cycle.hpp"
#include "aporbit/maps.hpp"

namespace aporbit {

/// Iterates Phi from y0 for H steps. Throws RangeViolation carrying the
/// time of the first iterate that leaves the box.
OrbitSeries generate_orbit(const MapDefinition& map, const Point& y0, std::size_t horizon);

/// Elementwise quantize (the discretized shadow ybar_K).
std::vector<GridState> discretize_orbit(const OrbitSeries& orbit, const GridSpec& g);

struct Conflict {
    std::size_t state = 0;     // index into TransitionTable::states
    std::size_t time = 0;      // t' with shadow[t'] == states[state]
    GridState alternative;     // shadow[t'+1], which differs from the table's successor
};

/// Next-value map on the distinct visited states.
///
/// k(n) comes from the earliest time state n appears in the shadow; later
/// visits with a different successor land in `conflicts`. If the final
/// shadow sample is a state never seen before, it has no observed
/// successor: it is kept out of `states`, stored in `terminal`, and edges
/// into it use kTerminal.
struct TransitionTable {
    static constexpr std::size_t kTerminal = std::numeric_limits<std::size_t>::max();

    std::vector<GridState> states;
    std::vector<std::size_t> next;
    std::vector<std::size_t> first_seen;
    std::vector<Conflict> conflicts;
    std::optional<GridState> terminal;

    std::size_t size() const noexcept { return states.size(); }
    /// True when the shadow revisited its last state, so every visited
    /// state has an observed successor.
    bool shadow_closed() const noexcept { return !terminal.has_value(); }
    /// Index of s in `states`, or nullopt.
    std::optional<std::size_t> find(const GridState& s) const;

    std::unordered_map<GridState, std::size_t, GridStateHash> index;
};

/// Requires shadow.size() >= 2.
TransitionTable build_transition_table(const std::vector<GridState>& shadow);

struct ChainResult {
    GridSpec grid;
    std::vector<GridState> y_star;  // y*(0) .. y*(H)
    std::vector<GridState> walk;    // y*(0) .. y*(T+L-1), all distinct
    std::size_t pre_period = 0;     // T_K
    std::size_t period = 1;         // L_K
    std::size_t table_size = 0;     // N
    std::size_t conflict_count = 0;

    std::size_t horizon() const noexcept { return y_star.size() - 1; }
    /// y*(t) for any t, continuing the cycle past the stored horizon.
    const GridState& state_at(std::size_t t) const;
    Point decoded_at(std::size_t t) const { return decode(state_at(t), grid); }
};

/// The y* sequence for t = 0..H without cycle certification. Throws
/// DanglingState if a successor is needed from a state that has none.
std::vector<std::size_t> iterate_chain(const TransitionTable& table, std::size_t initial,
                                       std::size_t horizon);

/// (T, L) of the chain started at table state `initial`; `walk` receives
/// the table indices of y*(0) .. y*(T+L-1). Throws DanglingState.
Cycle chain_cycle(const TransitionTable& table, std::size_t initial,
                  std::vector<std::size_t>* walk = nullptr);

/// y*(0) = initial, y*(t+1) = k(y*(t)), with (T, L) by first-visit cycle
/// detection (continued past H when needed; at most N + 1 steps).
ChainResult build_chain(const TransitionTable& table, const GridState& initial,
                        std::size_t horizon, const GridSpec& grid);

/// Everything from one orbit at one resolution.
struct PipelineResult {
    OrbitSeries orbit;
    std::vector<GridState> shadow;
    TransitionTable table;
    std::vector<std::size_t> chain_ids;  // y* for t = 0..H
    std::optional<ChainResult> chain;    // empty when the chain dangles
    std::string dangling_reason;
};

PipelineResult run_pipeline(const MapDefinition& map, const Point& y0, const GridSpec& grid,
                            std::size_t horizon);

/// 10 (K+1)^d capped at 10^7.
std::size_t default_horizon(const GridSpec& grid);

enum class CensusGenerator { RandomMap, RandomAr };

struct CensusSample {
    std::size_t id = 0;
    std::size_t pre_period = 0;
    std::size_t period = 0;
    bool resolved = true;  // false if the chain never closed within the horizon
};

struct CensusReport {
    int K = 0;
    int d = 0;
    std::size_t ensemble = 0;
    std::uint64_t seed = 0;
    CensusGenerator generator = CensusGenerator::RandomMap;
    std::uint64_t state_count = 0;  // (K+1)^d
    std::vector<CensusSample> samples;
    std::map<std::size_t, std::size_t> histogram;  // L -> count over resolved samples
    double mean_period = 0.0;
    double median_period = 0.0;
    std::size_t max_period = 0;
    std::size_t unresolved = 0;
};

/// Period statistics over an ensemble of random delay-structured maps.
/// RandomMap draws, for each visited grid state, a uniform new first index
/// (the shift fills the rest); it works on indices only, so K = 0 (one
/// state per axis) is accepted. RandomAr draws coefficients with
/// sum |p_l| <= 1 and a uniform y0, and runs the full float pipeline.
/// Each sample has its own seed derived from (seed, sample id), so results
/// do not depend on `threads`.
CensusReport period_census(int d, int K, std::size_t ensemble, std::uint64_t seed,
                           CensusGenerator generator, unsigned threads = 1);

}  // namespace aporbit
