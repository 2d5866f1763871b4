#include "aporbit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aporbit/error.hpp"

namespace aporbit {

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw InvalidArgument("point must have dimension >= 1");
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        double& c = coords_[i];
        if (std::isnan(c) || std::abs(c) > 1.0 + kClampBand) {
            throw OutOfRange("coordinate " + std::to_string(i + 1) + " = " + std::to_string(c) +
                             " lies outside [-1,1]");
        }
        c = std::clamp(c, -1.0, 1.0);
    }
}

GridSpec::GridSpec(int K, int d) : K_(K), d_(d) {
    if (K < 1) throw InvalidArgument("grid resolution K must be >= 1");
    if (d < 1) throw InvalidArgument("grid dimension d must be >= 1");
}

double GridSpec::node(int k) const {
    return static_cast<double>(2LL * k - K_) / static_cast<double>(K_);
}

std::uint64_t GridSpec::state_count() const noexcept {
    const std::uint64_t base = static_cast<std::uint64_t>(K_) + 1;
    std::uint64_t n = 1;
    for (int i = 0; i < d_; ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        n *= base;
    }
    return n;
}

double GridSpec::error_radius() const noexcept {
    return std::sqrt(static_cast<double>(d_)) / static_cast<double>(K_);
}

std::size_t GridStateHash::operator()(const GridState& s) const noexcept {
    // FNV-1a over the index words
    std::uint64_t h = 1469598103934665603ULL;
    for (int v : s.indices) {
        h ^= static_cast<std::uint32_t>(v);
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

namespace {

// True iff K*x >= c exactly, for finite x in [-1,1], K >= 1.
bool scaled_at_least(double x, int K, long long c) {
    if (x == 0.0) return 0 >= c;
    int e = 0;
    const double f = std::frexp(x, &e);
    const auto mantissa = static_cast<long long>(std::ldexp(f, 53));
    const int shift = 53 - e;  // x = mantissa * 2^-shift, shift >= 52
    const __int128 lhs = static_cast<__int128>(K) * mantissa;
    if (shift > 90) {
        // |lhs| < 2^84 while any nonzero c * 2^shift exceeds 2^90
        if (c == 0) return mantissa > 0;
        return c < 0;
    }
    const __int128 rhs = static_cast<__int128>(c) * (static_cast<__int128>(1) << shift);
    return lhs >= rhs;
}

}  // namespace

int quantize_coord(double x, int K) {
    const double u = (x + 1.0) * 0.5 * K;
    int k = static_cast<int>(std::floor(u));
    k = std::clamp(k, 0, K - 1);
    // midpoint between nodes k and k+1 is (2k + 1 - K)/K
    return scaled_at_least(x, K, 2LL * k + 1 - K) ? k + 1 : k;
}

GridState quantize(const Point& p, const GridSpec& g) {
    if (p.dim() != static_cast<std::size_t>(g.d())) throw DimensionMismatch(g.d(), p.dim());
    GridState s;
    s.indices.reserve(p.dim());
    for (double c : p.coords()) s.indices.push_back(quantize_coord(c, g.K()));
    return s;
}

Point decode(const GridState& s, const GridSpec& g) {
    if (s.indices.size() != static_cast<std::size_t>(g.d())) {
        throw DimensionMismatch(g.d(), s.indices.size());
    }
    std::vector<double> c;
    c.reserve(s.indices.size());
    for (int k : s.indices) {
        if (k < 0 || k > g.K()) throw OutOfRange("grid index " + std::to_string(k) + " outside 0..K");
        c.push_back(g.node(k));
    }
    return Point(std::move(c));
}

double quantization_error(const Point& p, const GridSpec& g) {
    const Point q = decode(quantize(p, g), g);
    return distance(p.coords(), q.coords());
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace aporbit
