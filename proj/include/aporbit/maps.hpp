#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aporbit/core.hpp"
#include "aporbit/expression.hpp"

namespace aporbit {

/// z(t) = sum_l p_l z(t-l) in delay coordinates; dimension = p.size().
struct ArKind {
    std::vector<double> p;
};

/// Scalar update f(x1..xd) for the first coordinate; the rest shift down.
struct DelayKind {
    Expr update;
};

/// One expression per output coordinate.
struct ExpressionKind {
    std::vector<Expr> coords;
};

/// Named built-in family. Known names:
///   identity           any d
///   tent      [s]      d = 1, x -> s (1 - 2|x|), 0 <= s <= 1
///   logistic  [r]      d = 1, x -> 1 - r x^2,    0 <= r <= 2
///   chebyshev [n]      d = 1, x -> cos(n acos x)
struct BuiltinKind {
    std::string name;
    std::vector<double> params;
};

using MapKind = std::variant<ArKind, DelayKind, ExpressionKind, BuiltinKind>;

class MapDefinition {
public:
    static MapDefinition ar(std::vector<double> p);
    static MapDefinition delay(const std::string& update, int d);
    static MapDefinition expression(const std::vector<std::string>& coords);
    static MapDefinition builtin(const std::string& name, std::vector<double> params, int d = 1);

    int dim() const noexcept { return dim_; }
    const MapKind& kind() const noexcept { return kind_; }
    bool is_ar() const noexcept { return std::holds_alternative<ArKind>(kind_); }
    std::string kind_name() const;

    std::string name;

private:
    MapDefinition(int dim, MapKind kind) : dim_(dim), kind_(std::move(kind)) {}

    int dim_;
    MapKind kind_;
};

/// Raw Phi(x) without any range check.
std::vector<double> evaluate_raw(const MapDefinition& map, std::span<const double> x);

/// Phi(p); throws RangeViolation if the image leaves the clamp band.
Point evaluate(const MapDefinition& map, const Point& p);

struct RangeReport {
    bool pass = true;
    double max_overshoot = 0.0;
    std::vector<double> worst_point;  // empty when no overshoot
    std::size_t evaluated = 0;
    std::string error;  // evaluation failure (e.g. division), sets pass = false
};

/// Probes the center, every corner (d <= 20) and `samples` shifted Halton
/// points. Passes iff the largest overshoot is at most kClampBand.
RangeReport validate_range(const MapDefinition& map, std::size_t samples, std::uint64_t seed);

enum class LipschitzMode { Analytic, Sampled };

struct LipschitzEstimate {
    double gamma = 0.0;
    LipschitzMode method = LipschitzMode::Analytic;
    std::size_t sample_count = 0;
};

/// Analytic (AR only): spectral norm of the companion matrix, an upper
/// bound. Sampled: largest observed ratio over random pairs, a lower bound.
LipschitzEstimate estimate_lipschitz(const MapDefinition& map, LipschitzMode mode,
                                     std::size_t samples, std::uint64_t seed);

/// Row-major d x d companion matrix with first row p and unit subdiagonal.
std::vector<double> companion_matrix(std::span<const double> p);

}  // namespace aporbit
