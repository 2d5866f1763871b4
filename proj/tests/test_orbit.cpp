#include <doctest.h>

#include <map>

#include "aporbit/cycle.hpp"
#include "aporbit/error.hpp"
#include "aporbit/orbit.hpp"
#include "aporbit/rng.hpp"

using namespace aporbit;

namespace {

GridState S(int i) { return GridState{{i}}; }

// Brute force: the first t whose value already appeared, by linear scan.
Cycle first_repeat_oracle(const std::vector<std::uint32_t>& seq) {
    for (std::size_t t = 1; t < seq.size(); ++t) {
        for (std::size_t s = 0; s < t; ++s) {
            if (seq[s] == seq[t]) return Cycle{s, t - s};
        }
    }
    return Cycle{};
}

}  // namespace

TEST_CASE("generate_orbit") {
    const auto neg = generate_orbit(MapDefinition::ar({-1.0}), Point({1.0}), 3);
    REQUIRE(neg.samples.size() == 4);
    CHECK(neg.samples[1] == Point({-1.0}));
    CHECK(neg.samples[3] == Point({-1.0}));

    const auto rot = generate_orbit(MapDefinition::ar({0.0, -1.0}), Point({1.0, 0.0}), 4);
    const std::vector<Point> expected = {Point({1.0, 0.0}), Point({0.0, 1.0}), Point({-1.0, 0.0}),
                                         Point({0.0, -1.0}), Point({1.0, 0.0})};
    CHECK(rot.samples == expected);

    try {
        generate_orbit(MapDefinition::ar({2.0}), Point({1.0}), 5);
        FAIL("expected RangeViolation");
    } catch (const RangeViolation& e) {
        CHECK(e.step() == 1);
    }
}

TEST_CASE("discretize_orbit") {
    OrbitSeries o{1, {Point({1.0}), Point({-1.0}), Point({1.0})}};
    CHECK(discretize_orbit(o, GridSpec(1, 1)) == std::vector<GridState>{S(1), S(0), S(1)});
    OrbitSeries q{1, {Point({0.5}), Point({0.25})}};
    CHECK(discretize_orbit(q, GridSpec(2, 1)) == std::vector<GridState>{S(2), S(1)});
    CHECK(discretize_orbit(OrbitSeries{1, {}}, GridSpec(2, 1)).empty());
}

TEST_CASE("transition table") {
    const GridState A = S(0), B = S(1), C = S(2);
    const auto t1 = build_transition_table({A, B, A, B});
    REQUIRE(t1.size() == 2);
    CHECK(t1.states[t1.next[*t1.find(A)]] == B);
    CHECK(t1.states[t1.next[*t1.find(B)]] == A);
    CHECK(t1.conflicts.empty());
    CHECK(t1.shadow_closed());

    const auto t2 = build_transition_table({A, B, A, C});
    CHECK(t2.states[t2.next[*t2.find(A)]] == B);
    REQUIRE(t2.conflicts.size() == 1);
    CHECK(t2.conflicts[0].time == 2);
    CHECK(t2.conflicts[0].alternative == C);
    CHECK_FALSE(t2.shadow_closed());
    CHECK(t2.terminal == C);
    CHECK_FALSE(t2.find(C).has_value());

    // With K = 1 the zero coordinates tie up to node 1, so (1,0) and (0,1)
    // share the state (1,1) and the table records a conflict.
    const auto coarse = run_pipeline(MapDefinition::ar({0.0, -1.0}), Point({1.0, 0.0}), GridSpec(1, 2), 8);
    CHECK(coarse.table.size() == 3);
    CHECK_FALSE(coarse.table.conflicts.empty());

    // K = 2 has 0 as a node: the orbit is on the grid and the table is a 4-cycle.
    const auto rot = run_pipeline(MapDefinition::ar({0.0, -1.0}), Point({1.0, 0.0}), GridSpec(2, 2), 8);
    CHECK(rot.table.size() == 4);
    CHECK(rot.table.conflicts.empty());
    REQUIRE(rot.chain);
    CHECK(rot.chain->pre_period == 0);
    CHECK(rot.chain->period == 4);

    CHECK_THROWS_AS(build_transition_table({A}), InvalidArgument);
}

TEST_CASE("build_chain") {
    const GridState A = S(0), B = S(1), C = S(2);
    const GridSpec g(2, 1);
    const auto c1 = build_chain(build_transition_table({A, B, A}), A, 5, g);
    CHECK(c1.pre_period == 0);
    CHECK(c1.period == 2);
    CHECK(c1.y_star == std::vector<GridState>{A, B, A, B, A, B});

    const auto c2 = build_chain(build_transition_table({A, B, C, B}), A, 5, g);
    CHECK(c2.pre_period == 1);
    CHECK(c2.period == 2);

    const auto c3 = build_chain(build_transition_table({A, A}), A, 3, g);
    CHECK(c3.pre_period == 0);
    CHECK(c3.period == 1);

    // Walking into the terminal state has no successor.
    CHECK_THROWS_AS(build_chain(build_transition_table({A, B, C}), A, 5, g), DanglingState);
}

TEST_CASE("detect_cycle") {
    CHECK(detect_cycle(std::vector<int>{5, 3, 7, 3, 7, 3}) == Cycle{1, 2});
    CHECK(detect_cycle(std::vector<int>{9, 9, 9}) == Cycle{0, 1});
    CHECK_THROWS_AS(detect_cycle(std::vector<int>{1, 2, 3}), NoCycleWithinHorizon);
    CHECK_THROWS_AS(detect_cycle(std::vector<int>{1, 2, 1, 3}), NoCycleWithinHorizon);
}

TEST_CASE("detect_cycle matches the brute-force oracle on random function graphs") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(2000));
        std::vector<std::uint32_t> f(n);
        for (auto& v : f) v = static_cast<std::uint32_t>(rng.below(n));
        std::vector<std::uint32_t> seq{static_cast<std::uint32_t>(rng.below(n))};
        for (std::uint32_t i = 0; i < n + 1; ++i) seq.push_back(f[seq.back()]);
        REQUIRE(detect_cycle(seq) == first_repeat_oracle(seq));
    }
}

TEST_CASE("chains are periodic past T and bounded by the state count") {
    Rng rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = rng.uniform(-0.6, 0.6), b = rng.uniform(-0.3, 0.3);
        const auto map = MapDefinition::ar({a, b});
        const Point y0({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
        const GridSpec g(1 + static_cast<int>(rng.below(16)), 2);
        const auto run = run_pipeline(map, y0, g, 300);
        REQUIRE(run.table.size() <= g.state_count());
        REQUIRE(run.chain);
        const auto& c = *run.chain;
        CHECK(c.y_star.front() == run.shadow.front());
        for (std::size_t t = c.pre_period; t + c.period <= c.horizon(); ++t) {
            REQUIRE(c.y_star[t + c.period] == c.y_star[t]);
        }
        if (run.table.conflicts.empty()) {
            for (std::size_t t = 0; t < run.shadow.size(); ++t) REQUIRE(c.y_star[t] == run.shadow[t]);
        }
    }
}

TEST_CASE("pipeline is deterministic") {
    const auto map = MapDefinition::delay("0.9*sin(2.5*x1 + x2)", 2);
    const auto a = run_pipeline(map, Point({0.3, -0.2}), GridSpec(12, 2), 2000);
    const auto b = run_pipeline(map, Point({0.3, -0.2}), GridSpec(12, 2), 2000);
    CHECK(a.shadow == b.shadow);
    CHECK(a.chain_ids == b.chain_ids);
    REQUIRE(a.chain);
    CHECK(a.chain->pre_period == b.chain->pre_period);
    CHECK(a.chain->period == b.chain->period);
}

TEST_CASE("default horizon") {
    CHECK(default_horizon(GridSpec(4, 2)) == 250);
    CHECK(default_horizon(GridSpec(100, 4)) == 10000000);
}

TEST_CASE("period census") {
    const auto single = period_census(1, 0, 20, 1, CensusGenerator::RandomMap);
    for (const auto& s : single.samples) CHECK(s.period == 1);

    const auto rep = period_census(2, 3, 200, 7, CensusGenerator::RandomMap);
    CHECK(rep.state_count == 16);
    CHECK(rep.samples.size() == 200);
    for (const auto& s : rep.samples) {
        CHECK(s.period >= 1);
        CHECK(s.period <= 16);
    }
    CHECK(rep.mean_period < 16.0);

    const auto again = period_census(2, 3, 200, 7, CensusGenerator::RandomMap, 4);
    REQUIRE(again.samples.size() == rep.samples.size());
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        CHECK(again.samples[i].pre_period == rep.samples[i].pre_period);
        CHECK(again.samples[i].period == rep.samples[i].period);
    }
    CHECK(again.mean_period == rep.mean_period);

    const auto ar = period_census(2, 6, 50, 3, CensusGenerator::RandomAr);
    for (const auto& s : ar.samples) {
        if (!s.resolved) continue;
        CHECK(s.period >= 1);
        CHECK(s.period <= 49);
    }
}
