#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aporbit/maps.hpp"
#include "aporbit/orbit.hpp"

namespace aporbit {

/// (2 sum_{s=1}^{t} gamma^s + 1) sqrt(d)/K, summed term by term so gamma = 1
/// needs no special case.
double error_bound(std::size_t t, double gamma, int d, int K);

/// C(t) gamma^t sqrt(d)/K with C(t) = 2(gamma - gamma^{1-t})/(gamma - 1) + gamma^{-t}.
/// Undefined at gamma = 1 (returns nullopt).
std::optional<double> error_bound_closed(std::size_t t, double gamma, int d, int K);

struct BoundReport {
    int K = 0;
    int d = 0;
    std::size_t horizon = 0;
    double gamma = 0.0;
    LipschitzMode gamma_method = LipschitzMode::Analytic;
    bool gamma_caveat = false;  // sampled gamma is a lower bound; violations may be spurious
    std::vector<double> actual;
    std::vector<double> bound;
    std::vector<std::optional<double>> closed_form;
    bool pass = true;
    std::size_t violations = 0;
    double worst_ratio = 0.0;
    std::size_t worst_t = 0;
    std::size_t conflicts = 0;
    bool shadow_closed = true;
    std::optional<Cycle> cycle;
    std::string note;
};

struct VerifyOptions {
    std::optional<double> gamma;    // overrides the estimate
    std::size_t lipschitz_samples = 20000;
    std::uint64_t seed = 0;
};

/// Resolves gamma for a map: analytic for AR maps, sampled otherwise.
LipschitzEstimate resolve_gamma(const MapDefinition& map, const VerifyOptions& opts);

/// Runs orbit -> shadow -> table -> chain and checks |y*(t) - y(t)| against
/// error_bound for every t <= H. A relative slack of 1e-12 absorbs
/// rounding in the distance computation.
BoundReport verify_error_bound(const MapDefinition& map, const Point& y0, int K,
                            std::size_t horizon, const VerifyOptions& opts = {});

/// Exact lcm via gcd; throws Overflow.
std::uint64_t lcm_periods(std::uint64_t L, std::uint64_t Lp);

/// Lexicographically smallest nondecreasing T' >= T with L_j | T'_{j+1} - T'_j
/// (greedy forward pass from T'_1 = T_1).
/// L_list[j] for the last level is unused.
std::vector<std::uint64_t> reselect_T(const std::vector<std::uint64_t>& T_list,
                                      const std::vector<std::uint64_t>& L_list);

struct LadderPlan {
    std::vector<int> K;
    std::vector<std::uint64_t> T;      // per-level pre-periods from the chains
    std::vector<std::uint64_t> L;      // per-level periods
    std::vector<std::uint64_t> T_sel;  // re-selected T'
    std::vector<std::uint64_t> lcm;    // lcm(L_{j+1}, L_j), one per consecutive pair
};

/// Fills T_sel and lcm from K, T, L.
LadderPlan make_ladder_plan(std::vector<int> K, std::vector<std::uint64_t> T,
                            std::vector<std::uint64_t> L);

struct ConditionReport {
    std::vector<double> terms;  // (2T'_{j+1} + 2 lcm + 1) gamma^{T'_{j+1} + lcm} / K_j
    std::vector<double> partial_sums;
    std::vector<double> ratios;  // terms[j+1] / terms[j]
    double budget = 0.0;
    bool below_budget = true;
    std::string verdict;
};

/// Finite evidence only; never claims the series converges.
ConditionReport check_convergence_condition(const LadderPlan& plan, double gamma, double budget);

/// sup over 0 <= t <= lcm(L_j, L_{j+1}) of |y*_{j+1}(t + T'_{j+1}) - y*_j(t + T'_{j+1})|.
/// Requires T'_j >= T_j, T'_{j+1} >= T_{j+1} (NotPeriodic otherwise) and
/// L_j | T'_{j+1} - T'_j (InvalidArgument otherwise).
double sup_difference(const ChainResult& chain_j, const ChainResult& chain_jp1,
                      std::uint64_t T_sel_j, std::uint64_t T_sel_jp1);

/// The same sup taken over 0 <= t <= window with chain j evaluated at its own
/// origin, t + T'_j. Used to check the reduction to one lcm window.
double sup_difference_direct(const ChainResult& chain_j, const ChainResult& chain_jp1,
                             std::uint64_t T_sel_j, std::uint64_t T_sel_jp1,
                             std::uint64_t window);

struct TailReport {
    LadderPlan plan;
    std::vector<double> chain_sups;   // sup_difference between levels j, j+1
    std::vector<double> shadow_sups;  // sup_{T'_j <= t <= T'_j + lcm} |y(t) - y*_j(t)|
    std::vector<std::size_t> conflicts;
    double tolerance = 0.0;
    bool consistent = false;  // both sequences nonincreasing and ending <= tolerance
    std::string verdict;
};

/// Ladder diagnostics for one orbit. Every level must produce a certified
/// chain (DanglingState otherwise). The float orbit is extended past
/// `horizon` as far as the windows require; the transition tables use
/// exactly `horizon` steps.
TailReport tail_convergence(const MapDefinition& map, const Point& y0,
                            const std::vector<int>& K_ladder, std::size_t horizon,
                            double tolerance);

}  // namespace aporbit
