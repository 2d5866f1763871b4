#include "aporbit/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aporbit/error.hpp"
#include "aporbit/rng.hpp"

namespace aporbit {

cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& c) {
    if (c.size() <= 1) return {cplx(0.0)};
    std::vector<cplx> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
    return d;
}

namespace {

// sum |c_k| |z|^k, the scale for the relative backward error
double poly_scale(const std::vector<cplx>& c, cplx z) {
    const double r = std::abs(z);
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

bool all_converged(const std::vector<cplx>& c, const std::vector<cplx>& z, double tol) {
    return std::all_of(z.begin(), z.end(), [&](cplx zi) {
        return std::abs(poly_eval(c, zi)) <= tol * poly_scale(c, zi);
    });
}

// Upper bound on root moduli (Fujiwara) for a monic polynomial.
double root_radius(const std::vector<cplx>& c) {
    const std::size_t n = c.size() - 1;
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double v = std::abs(c[k]);
        if (k == 0) v /= 2.0;
        r = std::max(r, std::pow(v, 1.0 / static_cast<double>(n - k)));
    }
    return 2.0 * r;
}

bool aberth_run(const std::vector<cplx>& c, const std::vector<cplx>& dc, std::vector<cplx>& z,
                const AberthOptions& opts) {
    const std::size_t n = z.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::size_t settled_for = 0;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx pz = poly_eval(c, z[i]);
            if (pz == cplx(0.0)) continue;
            const cplx ratio = pz / poly_eval(dc, z[i]);
            cplx repulsion = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            const cplx step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        if (max_step <= 4.0 * eps) return true;
        // Near a multiple root the residual test passes long before the
        // iterates stop moving; keep tightening for a while after that.
        if (all_converged(c, z, opts.tolerance)) {
            if (++settled_for >= 64) return true;
        } else {
            settled_for = 0;
        }
    }
    return all_converged(c, z, opts.tolerance);
}

}  // namespace

std::vector<cplx> aberth_roots(const std::vector<cplx>& coeffs, const AberthOptions& opts) {
    if (coeffs.size() < 2 || coeffs.back() == cplx(0.0)) {
        throw InvalidArgument("polynomial must have degree >= 1 with nonzero leading coefficient");
    }
    std::vector<cplx> c(coeffs);
    const cplx lead = c.back();
    for (auto& v : c) v /= lead;
    const std::size_t n = c.size() - 1;
    if (n == 1) return {-c[0]};

    const std::vector<cplx> dc = poly_derivative(c);
    const double radius = root_radius(c);
    Rng rng(opts.seed);

    std::vector<cplx> z(n);
    for (std::size_t attempt = 0; attempt <= opts.max_restarts; ++attempt) {
        for (std::size_t k = 0; k < n; ++k) {
            double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
            double r = 0.5 * radius;
            if (attempt > 0) {
                angle += rng.uniform(-0.5, 0.5);
                r *= rng.uniform(0.3, 1.0);
            }
            z[k] = std::polar(r, angle);
        }
        if (aberth_run(c, dc, z, opts) && all_converged(c, z, opts.tolerance)) return z;
    }
    throw RootFindingFailed("Aberth iteration did not reach tolerance " +
                            std::to_string(opts.tolerance) + " after " +
                            std::to_string(opts.max_restarts) + " restarts");
}

}  // namespace aporbit
