#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace aporbit {

/// Values this far outside [-1,1] are snapped back onto the boundary;
/// anything farther is rejected.
inline constexpr double kClampBand = 1e-12;

/// A state of the orbit, a vector in [-1,1]^d.
class Point {
public:
    /// Validates and clamps. Throws OutOfRange for coordinates farther than
    /// kClampBand outside [-1,1] (or NaN), InvalidArgument for d = 0.
    explicit Point(std::vector<double> coords);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }

    bool operator==(const Point&) const = default;

private:
    std::vector<double> coords_;
};

/// Uniform grid a_k = 2k/K - 1, k = 0..K, on each of d axes.
class GridSpec {
public:
    GridSpec(int K, int d);

    int K() const noexcept { return K_; }
    int d() const noexcept { return d_; }

    /// Node value a_k, correctly rounded from the exact rational (2k - K)/K.
    double node(int k) const;
    double spacing() const noexcept { return 2.0 / K_; }
    /// (K+1)^d, saturating at UINT64_MAX.
    std::uint64_t state_count() const noexcept;
    /// sqrt(d)/K.
    double error_radius() const noexcept;

    bool operator==(const GridSpec&) const = default;

private:
    int K_;
    int d_;
};

/// A quantized state: one node index per axis.
struct GridState {
    std::vector<int> indices;

    bool operator==(const GridState&) const = default;
    auto operator<=>(const GridState&) const = default;
};

struct GridStateHash {
    std::size_t operator()(const GridState& s) const noexcept;
};

/// Samples y(0)..y(H) of an orbit.
struct OrbitSeries {
    std::size_t dim = 0;
    std::vector<Point> samples;

    std::size_t horizon() const noexcept { return samples.empty() ? 0 : samples.size() - 1; }
};

/// Nearest-node index for one coordinate. An exact midpoint between two
/// nodes resolves to the larger node (the a - 0 convention). The
/// comparison against the midpoint is done in exact arithmetic.
int quantize_coord(double x, int K);

GridState quantize(const Point& p, const GridSpec& g);
Point decode(const GridState& s, const GridSpec& g);
double quantization_error(const Point& p, const GridSpec& g);

/// Euclidean distance between two equal-length vectors.
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace aporbit
