#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace aporbit {

using cplx = std::complex<double>;

/// Coefficients in ascending order: c[0] + c[1] z + ... + c[n] z^n.
cplx poly_eval(const std::vector<cplx>& c, cplx z);
std::vector<cplx> poly_derivative(const std::vector<cplx>& c);

struct AberthOptions {
    double tolerance = 1e-12;    // relative backward error per root
    std::size_t max_iterations = 500;
    std::size_t max_restarts = 8;
    std::uint64_t seed = 1;
};

/// All roots of c (c.back() != 0) by Aberth-Ehrlich simultaneous iteration.
/// A run that stalls is restarted from randomly perturbed initial points.
/// Throws RootFindingFailed when no restart reaches the tolerance.
std::vector<cplx> aberth_roots(const std::vector<cplx>& c, const AberthOptions& opts = {});

}  // namespace aporbit
