#pragma once

#include <cstddef>
#include <vector>

#include "aporbit/orbit.hpp"

namespace aporbit {

/// y(t) = sum_{m=0}^{M} a_m sin(2 pi m t / L) + b_m cos(2 pi m t / L), t >= T.
struct TrigForm {
    std::size_t period = 1;       // L
    std::size_t phase_origin = 0;  // T
    std::size_t harmonics = 0;    // M = floor(L/2)
    std::size_t dim = 0;
    std::vector<std::vector<double>> a;  // [m][coordinate]
    std::vector<std::vector<double>> b;
};

/// Real DFT of one period of the chain, indexed by t mod L so the
/// coefficients hold in the original time variable.
TrigForm fit_trig(const ChainResult& chain);

/// Same, from raw period samples: values[s][i] is coordinate i at time T + s.
TrigForm fit_trig(const std::vector<std::vector<double>>& values, std::size_t pre_period);

/// Evaluates the finite sum at integer t >= T (BeforePhaseOrigin otherwise).
std::vector<double> eval_trig(const TrigForm& form, long long t);

/// b_0^2 + sum (a_m^2 + b_m^2)/2, Nyquist term of even L weighted 1.
double parseval_energy(const TrigForm& form, std::size_t coord);

}  // namespace aporbit
