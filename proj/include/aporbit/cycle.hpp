#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aporbit/error.hpp"

namespace aporbit {

struct Cycle {
    std::size_t pre_period = 0;  // T
    std::size_t period = 1;      // L

    bool operator==(const Cycle&) const = default;
};

/// Minimal (T, L) for an eventually periodic sequence, by first-visit
/// lookup on exact values. The candidate is checked against
/// seq[t + L] == seq[t] for every T <= t < size - L. Throws
/// NoCycleWithinHorizon when no value repeats in the window or the
/// window contradicts the candidate.
template <typename T, typename Hash = std::hash<T>>
Cycle detect_cycle(const std::vector<T>& seq) {
    std::unordered_map<T, std::size_t, Hash> first_visit;
    first_visit.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const auto [it, inserted] = first_visit.emplace(seq[t], t);
        if (inserted) continue;
        const Cycle c{it->second, t - it->second};
        for (std::size_t s = c.pre_period; s + c.period < seq.size(); ++s) {
            if (!(seq[s + c.period] == seq[s])) {
                throw NoCycleWithinHorizon("sequence breaks the candidate cycle (T=" +
                                           std::to_string(c.pre_period) + ", L=" +
                                           std::to_string(c.period) + ") at t=" + std::to_string(s));
            }
        }
        return c;
    }
    throw NoCycleWithinHorizon("no repeated value within " + std::to_string(seq.size()) +
                               " samples");
}

}  // namespace aporbit
