#pragma once

#include <cstddef>
#include <vector>

#include "aporbit/polynomial.hpp"

namespace aporbit {

/// z(t) = sum_{l=1}^{d} p_l z(t-l), with initial data z(0), z(-1), ..., z(-d+1).
struct ARSpec {
    std::vector<double> p;
    std::vector<double> z0;  // z0[i] = z(-i)

    std::size_t order() const noexcept { return p.size(); }
    /// Throws InvalidArgument / OutOfRange.
    void validate() const;
};

/// z(0) .. z(H) by direct recursion.
std::vector<double> ar_recursion(const ARSpec& spec, std::size_t horizon);

/// mu^d - sum_l p_l mu^{d-l}, ascending coefficients.
std::vector<cplx> characteristic_polynomial(const std::vector<double>& p);

struct RootCluster {
    cplx mu;
    std::size_t multiplicity = 1;
    long conjugate = -1;  // index of the conjugate partner cluster, -1 when real
};

struct RootSet {
    std::vector<RootCluster> roots;
    double residual = 0.0;  // max |char_poly(mu)| over cluster representatives
    std::size_t degree = 0;
};

inline constexpr double kCircleTol = 1e-9;

/// Roots with multiplicities. Exactly vanishing trailing coefficients give
/// a root at 0 without iteration. The rest come from Aberth-Ehrlich with
/// relative tolerance `tol`; approximations within 1e-8 max(1,|mu|) are
/// clustered, and nearby clusters (within 1e-4 max(1,|mu|)) are merged when
/// their centroid is itself a numerical root. Conjugate clusters are made
/// exactly symmetric.
RootSet characteristic_roots(const ARSpec& spec, double tol = 1e-12);

enum class Boundedness { Bounded, Unbounded };

Boundedness classify(const RootSet& roots, double circle_tol = kCircleTol);

/// Growing terms only appear in closed_form_terms of unbounded specs.
enum class TermKind { AlmostPeriodic, Decaying, Transient, Growing };

/// a * t^k * mu^t, or for Transient terms (mu = 0) a * [t == k].
struct ARTerm {
    cplx mu;
    std::size_t k = 0;
    cplx a;
    TermKind kind = TermKind::Decaying;
};

struct ARDecomposition {
    std::vector<ARTerm> terms;
    RootSet roots;
    Boundedness classification = Boundedness::Bounded;
    std::vector<double> initial_run;  // z(0) .. z(d-1)
    double condition = 1.0;           // estimate for the interpolation system
    double solve_residual = 0.0;
    bool box_violated = false;        // some z(0..d-1) left [-1,1]

    /// sum of terms of the given kind at time t (complex, for reality checks)
    cplx eval_kind(TermKind kind, long long t) const;
    cplx eval_complex(long long t) const;
    /// Sum of all terms, real part.
    double eval(long long t) const;
};

/// Closed form without the boundedness gate; used for diagnostics on
/// growing specs. Throws IllConditioned when the condition estimate
/// exceeds 1e12.
ARDecomposition closed_form_terms(const ARSpec& spec, const RootSet& roots);

/// As closed_form_terms, but refuses unbounded specs (RefusedUnbounded).
ARDecomposition solve_coefficients(const ARSpec& spec, const RootSet& roots);

struct ApComponent {
    double frequency = 0.0;  // lambda = arg mu
    cplx mu;
    cplx coefficient;
};

/// ap(t) = Re sum c_j mu_j^t over the unit-circle terms.
struct AlmostPeriodicPart {
    std::vector<ApComponent> components;
    double operator()(long long t) const;
};

/// R(t) = Re sum a_j t^k_j mu_j^t over |mu| < 1.
struct DecayPart {
    std::vector<ARTerm> terms;
    double operator()(long long t) const;
};

struct SplitResult {
    AlmostPeriodicPart ap;
    DecayPart remainder;
    DecayPart transient;  // zero-root terms, vanish for t >= their count
};

/// Throws RefusedUnbounded if any term grows.
SplitResult split(const ARDecomposition& dec);

struct DecompositionCheck {
    std::size_t horizon = 0;
    double max_closed_error = 0.0;  // max_t |z_rec(t) - z_closed(t)|
    double max_imaginary = 0.0;     // max_t |Im z_closed(t)|
    double rho = 0.0;               // largest decaying modulus (0 if none)
    double envelope_C = 0.0;        // sum |a_j| over decaying terms
    double max_envelope_ratio = 0.0;  // max_t |z(t) - ap(t)| / (C rho^t), t past transients
    bool envelope_ok = true;
    double tail_gap = 0.0;          // |z(H) - ap(H)|
    bool box_violated = false;      // recursion left [-1,1] somewhere in 0..H
};

DecompositionCheck verify_decomposition(const ARSpec& spec, const ARDecomposition& dec,
                                        std::size_t horizon);

/// mu^t for integer t >= 0 in polar form, 0^0 = 1.
cplx power(cplx mu, long long t);

}  // namespace aporbit
