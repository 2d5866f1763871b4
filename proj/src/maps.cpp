#include "aporbit/maps.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "aporbit/error.hpp"
#include "aporbit/rng.hpp"

namespace aporbit {

namespace {

void check_builtin(const std::string& name, const std::vector<double>& params, int d) {
    if (name == "identity") {
        if (!params.empty()) throw InvalidArgument("identity takes no parameters");
        return;
    }
    if (name != "tent" && name != "logistic" && name != "chebyshev") {
        throw InvalidArgument("unknown builtin map '" + name + "'");
    }
    if (d != 1) throw InvalidArgument("builtin '" + name + "' is one-dimensional");
    if (params.size() != 1) throw InvalidArgument("builtin '" + name + "' takes one parameter");
    const double v = params[0];
    if (name == "tent" && !(v >= 0.0 && v <= 1.0)) throw InvalidArgument("tent slope must be in [0,1]");
    if (name == "logistic" && !(v >= 0.0 && v <= 2.0)) throw InvalidArgument("logistic r must be in [0,2]");
    if (name == "chebyshev" && !(v >= 0.0 && v == std::floor(v))) {
        throw InvalidArgument("chebyshev degree must be a nonnegative integer");
    }
}

double eval_builtin(const BuiltinKind& b, double x) {
    if (b.name == "tent") return b.params[0] * (1.0 - 2.0 * std::abs(x));
    if (b.name == "logistic") return 1.0 - b.params[0] * x * x;
    return std::cos(b.params[0] * std::acos(std::clamp(x, -1.0, 1.0)));
}

constexpr std::array<int, 32> kPrimes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29,  31,
                                      37, 41, 43, 47, 53, 59, 61, 67, 71, 73,  79,
                                      83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0;
    double r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

void track_overshoot(RangeReport& rep, std::span<const double> x, std::span<const double> y) {
    ++rep.evaluated;
    for (double v : y) {
        const double over = std::isnan(v) ? INFINITY : std::max(0.0, std::abs(v) - 1.0);
        if (over > rep.max_overshoot) {
            rep.max_overshoot = over;
            rep.worst_point.assign(x.begin(), x.end());
        }
    }
}

}  // namespace

MapDefinition MapDefinition::ar(std::vector<double> p) {
    if (p.empty()) throw InvalidArgument("AR map needs at least one coefficient");
    for (double v : p) {
        if (!std::isfinite(v)) throw InvalidArgument("AR coefficients must be finite");
    }
    const int d = static_cast<int>(p.size());
    return MapDefinition(d, ArKind{std::move(p)});
}

MapDefinition MapDefinition::delay(const std::string& update, int d) {
    return MapDefinition(d, DelayKind{parse_expression(update, d)});
}

MapDefinition MapDefinition::expression(const std::vector<std::string>& coords) {
    if (coords.empty()) throw InvalidArgument("expression map needs at least one coordinate");
    const int d = static_cast<int>(coords.size());
    ExpressionKind k;
    for (const auto& c : coords) k.coords.push_back(parse_expression(c, d));
    return MapDefinition(d, std::move(k));
}

MapDefinition MapDefinition::builtin(const std::string& name, std::vector<double> params, int d) {
    if (d < 1) throw InvalidArgument("map dimension must be >= 1");
    check_builtin(name, params, d);
    return MapDefinition(d, BuiltinKind{name, std::move(params)});
}

std::string MapDefinition::kind_name() const {
    switch (kind_.index()) {
        case 0: return "ar";
        case 1: return "delay";
        case 2: return "expr";
        default: return "builtin";
    }
}

std::vector<double> evaluate_raw(const MapDefinition& map, std::span<const double> x) {
    const auto d = static_cast<std::size_t>(map.dim());
    if (x.size() != d) throw DimensionMismatch(d, x.size());
    std::vector<double> out(d);
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ArKind>) {
                double z = 0.0;
                for (std::size_t l = 0; l < d; ++l) z += k.p[l] * x[l];
                out[0] = z;
                std::copy(x.begin(), x.end() - 1, out.begin() + 1);
            } else if constexpr (std::is_same_v<K, DelayKind>) {
                out[0] = evaluate(k.update, x);
                std::copy(x.begin(), x.end() - 1, out.begin() + 1);
            } else if constexpr (std::is_same_v<K, ExpressionKind>) {
                for (std::size_t i = 0; i < d; ++i) out[i] = evaluate(k.coords[i], x);
            } else {
                if (k.name == "identity") {
                    std::copy(x.begin(), x.end(), out.begin());
                } else {
                    out[0] = eval_builtin(k, x[0]);
                }
            }
        },
        map.kind());
    return out;
}

Point evaluate(const MapDefinition& map, const Point& p) {
    std::vector<double> y = evaluate_raw(map, p.coords());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::isnan(y[i]) || std::abs(y[i]) > 1.0 + kClampBand) {
            throw RangeViolation("map output coordinate " + std::to_string(i + 1) + " = " +
                                 std::to_string(y[i]) + " leaves [-1,1]");
        }
    }
    return Point(std::move(y));
}

RangeReport validate_range(const MapDefinition& map, std::size_t samples, std::uint64_t seed) {
    const auto d = static_cast<std::size_t>(map.dim());
    RangeReport rep;
    std::vector<double> x(d, 0.0);
    auto probe = [&] { track_overshoot(rep, x, evaluate_raw(map, x)); };
    try {
        probe();  // center
        if (d <= 20) {
            // bit set means -1, so mask 0 is the all-ones corner
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
                for (std::size_t i = 0; i < d; ++i) x[i] = (mask >> i & 1U) ? -1.0 : 1.0;
                probe();
            }
        }
        Rng rng(seed);
        std::vector<double> shift(d);
        for (auto& s : shift) s = rng.uniform();
        for (std::size_t n = 1; n <= samples; ++n) {
            for (std::size_t i = 0; i < d; ++i) {
                double u = i < kPrimes.size() ? radical_inverse(n, kPrimes[i]) : rng.uniform();
                u += shift[i];
                if (u >= 1.0) u -= 1.0;
                x[i] = 2.0 * u - 1.0;
            }
            probe();
        }
    } catch (const EvaluationError& e) {
        rep.error = e.what();
        rep.worst_point = x;
        rep.pass = false;
        return rep;
    }
    rep.pass = rep.max_overshoot <= kClampBand;
    return rep;
}

std::vector<double> companion_matrix(std::span<const double> p) {
    const std::size_t d = p.size();
    std::vector<double> m(d * d, 0.0);
    for (std::size_t j = 0; j < d; ++j) m[j] = p[j];
    for (std::size_t i = 1; i < d; ++i) m[i * d + (i - 1)] = 1.0;
    return m;
}

LipschitzEstimate estimate_lipschitz(const MapDefinition& map, LipschitzMode mode,
                                     std::size_t samples, std::uint64_t seed) {
    const auto d = static_cast<std::size_t>(map.dim());
    LipschitzEstimate est;
    est.method = mode;

    if (mode == LipschitzMode::Analytic) {
        const auto* ar = std::get_if<ArKind>(&map.kind());
        if (ar == nullptr) {
            throw AnalyticUnavailable("analytic Lipschitz constant is only available for AR maps");
        }
        const std::vector<double> c = companion_matrix(ar->p);
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            m(c.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        est.gamma = svd.singularValues()(0);
        return est;
    }

    Rng rng(seed);
    std::vector<double> w(d), v(d);
    for (std::size_t n = 0; n < samples; ++n) {
        for (auto& c : w) c = rng.uniform(-1.0, 1.0);
        if (n % 2 == 0) {
            for (auto& c : v) c = rng.uniform(-1.0, 1.0);
        } else {
            // local pair: random direction, step 10^U(-5,-1)
            double norm = 0.0;
            for (auto& c : v) {
                const double u1 = 1.0 - rng.uniform();
                const double u2 = rng.uniform();
                c = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
                norm += c * c;
            }
            norm = std::sqrt(norm);
            const double step = std::pow(10.0, rng.uniform(-5.0, -1.0));
            for (std::size_t i = 0; i < d; ++i) {
                v[i] = std::clamp(w[i] + step * v[i] / norm, -1.0, 1.0);
            }
        }
        const double sep = distance(w, v);
        if (sep < 1e-6) continue;
        const double ratio = distance(evaluate_raw(map, w), evaluate_raw(map, v)) / sep;
        est.gamma = std::max(est.gamma, ratio);
        ++est.sample_count;
    }
    return est;
}

}  // namespace aporbit
