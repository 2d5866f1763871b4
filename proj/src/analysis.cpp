#include "aporbit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aporbit/error.hpp"

namespace aporbit {

double error_bound(std::size_t t, double gamma, int d, int K) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (K < 1 || d < 1) throw InvalidArgument("error_bound needs K >= 1 and d >= 1");
    double sum = 0.0;
    double power = 1.0;
    for (std::size_t s = 1; s <= t; ++s) {
        power *= gamma;
        sum += power;
    }
    return (2.0 * sum + 1.0) * std::sqrt(static_cast<double>(d)) / static_cast<double>(K);
}

std::optional<double> error_bound_closed(std::size_t t, double gamma, int d, int K) {
    if (gamma == 1.0) return std::nullopt;
    const double td = static_cast<double>(t);
    const double C = 2.0 * (gamma - std::pow(gamma, 1.0 - td)) / (gamma - 1.0) + std::pow(gamma, -td);
    return C * std::pow(gamma, td) * std::sqrt(static_cast<double>(d)) / static_cast<double>(K);
}

LipschitzEstimate resolve_gamma(const MapDefinition& map, const VerifyOptions& opts) {
    if (opts.gamma) {
        if (!(*opts.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
        return {*opts.gamma, LipschitzMode::Analytic, 0};
    }
    if (map.is_ar()) return estimate_lipschitz(map, LipschitzMode::Analytic, 0, opts.seed);
    return estimate_lipschitz(map, LipschitzMode::Sampled, opts.lipschitz_samples, opts.seed);
}

BoundReport verify_error_bound(const MapDefinition& map, const Point& y0, int K,
                            std::size_t horizon, const VerifyOptions& opts) {
    const GridSpec grid(K, map.dim());
    const LipschitzEstimate gamma = resolve_gamma(map, opts);
    const PipelineResult run = run_pipeline(map, y0, grid, horizon);
    if (run.chain_ids.size() != horizon + 1) {
        throw DanglingState("cannot verify: " + run.dangling_reason, -1);
    }

    BoundReport rep;
    rep.K = K;
    rep.d = map.dim();
    rep.horizon = horizon;
    rep.gamma = gamma.gamma;
    rep.gamma_method = gamma.method;
    rep.gamma_caveat = gamma.method == LipschitzMode::Sampled;
    rep.conflicts = run.table.conflicts.size();
    rep.shadow_closed = run.table.shadow_closed();
    if (run.chain) rep.cycle = Cycle{run.chain->pre_period, run.chain->period};
    if (rep.gamma_caveat) {
        rep.note = "gamma is a sampled lower bound; a violation may reflect an underestimated gamma";
    }

    rep.actual.reserve(horizon + 1);
    rep.bound.reserve(horizon + 1);
    double partial = 0.0;
    double power = 1.0;
    const double radius = grid.error_radius();
    for (std::size_t t = 0; t <= horizon; ++t) {
        if (t > 0) {
            power *= rep.gamma;
            partial += power;
        }
        const Point ystar = decode(run.table.states[run.chain_ids[t]], grid);
        const double err = distance(ystar.coords(), run.orbit.samples[t].coords());
        const double b = (2.0 * partial + 1.0) * radius;
        rep.actual.push_back(err);
        rep.bound.push_back(b);
        rep.closed_form.push_back(error_bound_closed(t, rep.gamma, rep.d, K));
        const double ratio = err / b;
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_t = t;
        }
        if (err > b * (1.0 + 1e-12)) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

std::uint64_t lcm_periods(std::uint64_t L, std::uint64_t Lp) {
    if (L == 0 || Lp == 0) throw InvalidArgument("periods must be >= 1");
    const std::uint64_t g = std::gcd(L, Lp);
    const std::uint64_t q = L / g;
    if (q > UINT64_MAX / Lp) throw Overflow("lcm of periods overflows 64 bits");
    return q * Lp;
}

std::vector<std::uint64_t> reselect_T(const std::vector<std::uint64_t>& T_list,
                                      const std::vector<std::uint64_t>& L_list) {
    if (T_list.size() != L_list.size()) throw InvalidArgument("T and L lists differ in length");
    std::vector<std::uint64_t> out;
    out.reserve(T_list.size());
    for (std::size_t j = 0; j < T_list.size(); ++j) {
        if (L_list[j] == 0) throw InvalidArgument("periods must be >= 1");
        if (j == 0) {
            out.push_back(T_list[0]);
            continue;
        }
        const std::uint64_t prev = out.back();
        const std::uint64_t L = L_list[j - 1];
        const std::uint64_t gap = T_list[j] > prev ? T_list[j] - prev : 0;
        const std::uint64_t steps = (gap + L - 1) / L;
        if (steps > (UINT64_MAX - prev) / L) throw Overflow("re-selected T overflows 64 bits");
        out.push_back(prev + L * steps);
    }
    return out;
}

LadderPlan make_ladder_plan(std::vector<int> K, std::vector<std::uint64_t> T,
                            std::vector<std::uint64_t> L) {
    if (K.size() != T.size() || K.size() != L.size()) {
        throw InvalidArgument("ladder lists differ in length");
    }
    for (std::size_t j = 1; j < K.size(); ++j) {
        if (K[j] <= K[j - 1]) throw InvalidArgument("ladder resolutions must increase strictly");
    }
    LadderPlan plan{std::move(K), std::move(T), std::move(L), {}, {}};
    plan.T_sel = reselect_T(plan.T, plan.L);
    for (std::size_t j = 0; j + 1 < plan.L.size(); ++j) {
        plan.lcm.push_back(lcm_periods(plan.L[j + 1], plan.L[j]));
    }
    return plan;
}

ConditionReport check_convergence_condition(const LadderPlan& plan, double gamma, double budget) {
    ConditionReport rep;
    rep.budget = budget;
    double sum = 0.0;
    for (std::size_t j = 0; j < plan.lcm.size(); ++j) {
        const double T = static_cast<double>(plan.T_sel[j + 1]);
        const double lcm = static_cast<double>(plan.lcm[j]);
        const double term = (2.0 * T + 2.0 * lcm + 1.0) * std::pow(gamma, T + lcm) /
                            static_cast<double>(plan.K[j]);
        sum += term;
        rep.terms.push_back(term);
        rep.partial_sums.push_back(sum);
        if (j > 0) rep.ratios.push_back(term / rep.terms[j - 1]);
    }
    rep.below_budget = sum < budget;
    rep.verdict = std::string(rep.below_budget ? "partial sums stay below the budget"
                                               : "partial sums exceed the budget") +
                  "; condition not decidable from finitely many terms";
    return rep;
}

namespace {

void check_origin(const ChainResult& c, std::uint64_t T_sel, const char* which) {
    if (T_sel < c.pre_period) {
        throw NotPeriodic(std::string(which) + " chain is not yet periodic at the selected origin");
    }
}

}  // namespace

double sup_difference(const ChainResult& chain_j, const ChainResult& chain_jp1,
                      std::uint64_t T_sel_j, std::uint64_t T_sel_jp1) {
    check_origin(chain_j, T_sel_j, "coarse");
    check_origin(chain_jp1, T_sel_jp1, "fine");
    if (T_sel_jp1 < T_sel_j || (T_sel_jp1 - T_sel_j) % chain_j.period != 0) {
        throw InvalidArgument("selected origins violate the divisibility constraint");
    }
    const std::uint64_t window = lcm_periods(chain_jp1.period, chain_j.period);
    double sup = 0.0;
    for (std::uint64_t t = 0; t <= window; ++t) {
        const Point fine = chain_jp1.decoded_at(t + T_sel_jp1);
        const Point coarse = chain_j.decoded_at(t + T_sel_jp1);
        sup = std::max(sup, distance(fine.coords(), coarse.coords()));
    }
    return sup;
}

double sup_difference_direct(const ChainResult& chain_j, const ChainResult& chain_jp1,
                             std::uint64_t T_sel_j, std::uint64_t T_sel_jp1,
                             std::uint64_t window) {
    double sup = 0.0;
    for (std::uint64_t t = 0; t <= window; ++t) {
        const Point fine = chain_jp1.decoded_at(t + T_sel_jp1);
        const Point coarse = chain_j.decoded_at(t + T_sel_j);
        sup = std::max(sup, distance(fine.coords(), coarse.coords()));
    }
    return sup;
}

TailReport tail_convergence(const MapDefinition& map, const Point& y0,
                            const std::vector<int>& K_ladder, std::size_t horizon,
                            double tolerance) {
    if (K_ladder.empty()) throw InvalidArgument("empty K ladder");
    std::vector<ChainResult> chains;
    std::vector<std::uint64_t> T, L;
    TailReport rep;
    rep.tolerance = tolerance;
    for (int K : K_ladder) {
        PipelineResult run = run_pipeline(map, y0, GridSpec(K, map.dim()), horizon);
        if (!run.chain) throw DanglingState("level K=" + std::to_string(K) + ": " + run.dangling_reason, -1);
        T.push_back(run.chain->pre_period);
        L.push_back(run.chain->period);
        rep.conflicts.push_back(run.table.conflicts.size());
        chains.push_back(std::move(*run.chain));
    }
    rep.plan = make_ladder_plan(K_ladder, std::move(T), std::move(L));

    std::uint64_t needed = horizon;
    for (std::size_t j = 0; j + 1 < chains.size(); ++j) {
        needed = std::max(needed, rep.plan.T_sel[j] + rep.plan.lcm[j]);
    }
    const OrbitSeries orbit = generate_orbit(map, y0, static_cast<std::size_t>(needed));

    for (std::size_t j = 0; j + 1 < chains.size(); ++j) {
        rep.chain_sups.push_back(
            sup_difference(chains[j], chains[j + 1], rep.plan.T_sel[j], rep.plan.T_sel[j + 1]));
        double sup = 0.0;
        for (std::uint64_t t = rep.plan.T_sel[j]; t <= rep.plan.T_sel[j] + rep.plan.lcm[j]; ++t) {
            const Point ystar = chains[j].decoded_at(t);
            sup = std::max(sup, distance(orbit.samples[t].coords(), ystar.coords()));
        }
        rep.shadow_sups.push_back(sup);
    }

    if (rep.chain_sups.empty()) {
        rep.verdict = "needs at least two ladder levels";
        return rep;
    }
    auto nonincreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i] > v[i - 1]) return false;
        }
        return true;
    };
    rep.consistent = nonincreasing(rep.chain_sups) && nonincreasing(rep.shadow_sups) &&
                     rep.chain_sups.back() <= tolerance && rep.shadow_sups.back() <= tolerance;
    rep.verdict = rep.consistent ? "consistent with convergence to an almost periodic limit"
                                 : "not (yet) consistent with convergence at this tolerance";
    return rep;
}

}  // namespace aporbit
