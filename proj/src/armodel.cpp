#include "aporbit/armodel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aporbit/core.hpp"
#include "aporbit/error.hpp"

namespace aporbit {

void ARSpec::validate() const {
    if (p.empty()) throw InvalidArgument("AR spec needs at least one coefficient");
    if (z0.size() != p.size()) {
        throw DimensionMismatch(p.size(), z0.size());
    }
    for (double v : p) {
        if (!std::isfinite(v)) throw InvalidArgument("AR coefficients must be finite");
    }
    for (double v : z0) {
        if (std::isnan(v) || std::abs(v) > 1.0 + kClampBand) {
            throw OutOfRange("AR initial data must lie in [-1,1]");
        }
    }
}

std::vector<double> ar_recursion(const ARSpec& spec, std::size_t horizon) {
    spec.validate();
    const std::size_t d = spec.order();
    std::vector<double> hist(spec.z0.rbegin(), spec.z0.rend());  // z(-d+1) .. z(0)
    hist.reserve(d + horizon);
    for (std::size_t t = 1; t <= horizon; ++t) {
        double z = 0.0;
        for (std::size_t l = 1; l <= d; ++l) z += spec.p[l - 1] * hist[hist.size() - l];
        hist.push_back(z);
    }
    return {hist.begin() + static_cast<long>(d - 1), hist.end()};
}

std::vector<cplx> characteristic_polynomial(const std::vector<double>& p) {
    const std::size_t d = p.size();
    std::vector<cplx> c(d + 1);
    c[d] = 1.0;
    for (std::size_t l = 1; l <= d; ++l) c[d - l] = -p[l - 1];
    return c;
}

cplx power(cplx mu, long long t) {
    if (t == 0) return 1.0;
    const double r = std::abs(mu);
    if (r == 0.0) return 0.0;
    return std::polar(std::pow(r, static_cast<double>(t)), static_cast<double>(t) * std::arg(mu));
}

namespace {

double cluster_radius(cplx mu, double scale) { return scale * std::max(1.0, std::abs(mu)); }

double rel_residual(const std::vector<cplx>& c, cplx z) {
    const double r = std::abs(z);
    double scale = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) scale = scale * r + std::abs(*it);
    return std::abs(poly_eval(c, z)) / scale;
}

constexpr double kRootTest = 1e3 * std::numeric_limits<double>::epsilon();

struct Group {
    cplx sum = 0.0;
    std::size_t count = 0;
    cplx centroid() const { return sum / static_cast<double>(count); }
};

std::vector<Group> cluster_roots(const std::vector<cplx>& approx, const std::vector<cplx>& poly) {
    std::vector<Group> groups;
    for (cplx z : approx) groups.push_back({z, 1});

    // pass 1: tight radius, unconditional
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < groups.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < groups.size() && !merged; ++j) {
                const cplx ci = groups[i].centroid();
                if (std::abs(ci - groups[j].centroid()) <= cluster_radius(ci, 1e-8)) {
                    groups[i].sum += groups[j].sum;
                    groups[i].count += groups[j].count;
                    groups.erase(groups.begin() + static_cast<long>(j));
                    merged = true;
                }
            }
        }
    }

    // pass 2: a multiple root splits into approximations ~eps^(1/m) apart;
    // merge when the combined centroid is a root to near machine precision
    for (bool merged = true; merged;) {
        merged = false;
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            for (std::size_t j = i + 1; j < groups.size(); ++j) {
                const cplx ci = groups[i].centroid();
                const double gap = std::abs(ci - groups[j].centroid());
                if (gap > cluster_radius(ci, 1e-4) || gap >= best) continue;
                const Group u{groups[i].sum + groups[j].sum, groups[i].count + groups[j].count};
                if (rel_residual(poly, u.centroid()) <= kRootTest) {
                    best = gap;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (std::isfinite(best)) {
            groups[bi].sum += groups[bj].sum;
            groups[bi].count += groups[bj].count;
            groups.erase(groups.begin() + static_cast<long>(bj));
            merged = true;
        }
    }
    return groups;
}

// An m-fold root is a simple root of the (m-1)th derivative, so Newton on
// that derivative converges quadratically where the centroid is only
// accurate to about eps^(1/m).
cplx polish_multiple(const std::vector<cplx>& poly, cplx z, std::size_t m) {
    std::vector<cplx> lo = poly;
    for (std::size_t i = 1; i < m; ++i) lo = poly_derivative(lo);
    const std::vector<cplx> hi = poly_derivative(lo);
    cplx w = z;
    for (int it = 0; it < 20; ++it) {
        const cplx den = poly_eval(hi, w);
        if (den == cplx(0.0)) break;
        const cplx step = poly_eval(lo, w) / den;
        w -= step;
        if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w))) break;
    }
    const bool sane = std::isfinite(w.real()) && std::isfinite(w.imag()) &&
                      std::abs(w - z) <= cluster_radius(z, 1e-4);
    return sane ? w : z;
}

}  // namespace

RootSet characteristic_roots(const ARSpec& spec, double tol) {
    if (spec.p.empty()) throw InvalidArgument("AR spec needs at least one coefficient");
    const std::size_t d = spec.p.size();
    std::size_t zeros = 0;
    while (zeros < d && spec.p[d - 1 - zeros] == 0.0) ++zeros;

    RootSet set;
    set.degree = d;
    const std::vector<double> reduced(spec.p.begin(), spec.p.end() - static_cast<long>(zeros));
    const std::vector<cplx> full = characteristic_polynomial(spec.p);

    if (!reduced.empty()) {
        const std::vector<cplx> poly = characteristic_polynomial(reduced);
        AberthOptions opts;
        opts.tolerance = tol;

        const std::vector<Group> groups = cluster_roots(aberth_roots(poly, opts), poly);

        // real clusters get an exactly zero imaginary part
        std::vector<RootCluster> real, upper, lower;
        for (const Group& g : groups) {
            const cplx c = g.count > 1 ? polish_multiple(poly, g.centroid(), g.count) : g.centroid();
            const bool near_axis =
                std::abs(c.imag()) <= cluster_radius(c, 1e-8) ||
                (g.count > 1 && std::abs(c.imag()) <= cluster_radius(c, 1e-4) &&
                 rel_residual(poly, cplx(c.real(), 0.0)) <= kRootTest);
            if (near_axis) {
                real.push_back({cplx(c.real(), 0.0), g.count, -1});
            } else if (c.imag() > 0) {
                upper.push_back({c, g.count, -1});
            } else {
                lower.push_back({c, g.count, -1});
            }
        }
        if (upper.size() != lower.size()) {
            throw RootFindingFailed("complex roots do not pair into conjugates");
        }
        set.roots = real;
        std::vector<bool> used(lower.size(), false);
        for (const RootCluster& u : upper) {
            std::size_t best = lower.size();
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < lower.size(); ++j) {
                if (used[j] || lower[j].multiplicity != u.multiplicity) continue;
                const double g = std::abs(u.mu - std::conj(lower[j].mu));
                if (g < gap) {
                    gap = g;
                    best = j;
                }
            }
            if (best == lower.size()) throw RootFindingFailed("complex roots do not pair into conjugates");
            used[best] = true;
            const cplx mu = 0.5 * (u.mu + std::conj(lower[best].mu));
            const long at = static_cast<long>(set.roots.size());
            set.roots.push_back({mu, u.multiplicity, at + 1});
            set.roots.push_back({std::conj(mu), u.multiplicity, at});
        }
    }
    if (zeros > 0) set.roots.push_back({cplx(0.0), zeros, -1});

    for (const RootCluster& r : set.roots) {
        set.residual = std::max(set.residual, std::abs(poly_eval(full, r.mu)));
    }
    return set;
}

Boundedness classify(const RootSet& roots, double circle_tol) {
    for (const RootCluster& r : roots.roots) {
        const double m = std::abs(r.mu);
        if (m < 1.0 - circle_tol) continue;
        if (std::abs(m - 1.0) <= circle_tol && r.multiplicity == 1) continue;
        return Boundedness::Unbounded;
    }
    return Boundedness::Bounded;
}

namespace {

cplx term_value(const ARTerm& term, long long t) {
    if (term.kind == TermKind::Transient) return t == static_cast<long long>(term.k) ? term.a : cplx(0.0);
    const double tk = term.k == 0 ? 1.0 : std::pow(static_cast<double>(t), static_cast<double>(term.k));
    return term.a * tk * power(term.mu, t);
}

}  // namespace

cplx ARDecomposition::eval_kind(TermKind kind, long long t) const {
    cplx s = 0.0;
    for (const ARTerm& term : terms) {
        if (term.kind == kind) s += term_value(term, t);
    }
    return s;
}

cplx ARDecomposition::eval_complex(long long t) const {
    return eval_kind(TermKind::AlmostPeriodic, t) + eval_kind(TermKind::Decaying, t) +
           eval_kind(TermKind::Transient, t) + eval_kind(TermKind::Growing, t);
}

double ARDecomposition::eval(long long t) const { return eval_complex(t).real(); }

ARDecomposition closed_form_terms(const ARSpec& spec, const RootSet& roots) {
    spec.validate();
    const std::size_t d = spec.order();
    ARDecomposition dec;
    dec.roots = roots;
    dec.classification = classify(roots);
    dec.initial_run = ar_recursion(spec, d - 1);
    dec.box_violated = std::any_of(dec.initial_run.begin(), dec.initial_run.end(),
                                   [](double v) { return std::abs(v) > 1.0 + kClampBand; });

    // one basis function per (cluster, power)
    std::vector<std::size_t> first_term;
    for (const RootCluster& r : roots.roots) {
        first_term.push_back(dec.terms.size());
        for (std::size_t k = 0; k < r.multiplicity; ++k) {
            ARTerm term{r.mu, k, 0.0, TermKind::Decaying};
            const double m = std::abs(r.mu);
            if (r.mu == cplx(0.0)) {
                term.kind = TermKind::Transient;
            } else if (m > 1.0 + kCircleTol || (std::abs(m - 1.0) <= kCircleTol && k > 0)) {
                term.kind = TermKind::Growing;
            } else if (std::abs(m - 1.0) <= kCircleTol) {
                term.kind = TermKind::AlmostPeriodic;
            }
            dec.terms.push_back(term);
        }
    }
    if (dec.terms.size() != d) {
        throw RootFindingFailed("root multiplicities sum to " + std::to_string(dec.terms.size()) +
                                ", expected " + std::to_string(d));
    }

    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd A(n, n);
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        rhs(t) = dec.initial_run[static_cast<std::size_t>(t)];
        for (Eigen::Index j = 0; j < n; ++j) {
            ARTerm unit = dec.terms[static_cast<std::size_t>(j)];
            unit.a = 1.0;
            A(t, j) = term_value(unit, t);
        }
    }
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    const double rcond = lu.rcond();
    dec.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(dec.condition <= 1e12)) {
        throw IllConditioned("interpolation system is ill-conditioned (estimate " +
                                 std::to_string(dec.condition) + ")",
                             dec.condition);
    }
    Eigen::VectorXcd x = lu.solve(rhs);
    x += lu.solve(Eigen::VectorXcd(rhs - A * x));  // one refinement step

    for (Eigen::Index j = 0; j < n; ++j) dec.terms[static_cast<std::size_t>(j)].a = x(j);

    // conjugate clusters carry conjugate coefficients; real clusters real ones
    for (std::size_t c = 0; c < roots.roots.size(); ++c) {
        const RootCluster& r = roots.roots[c];
        for (std::size_t k = 0; k < r.multiplicity; ++k) {
            ARTerm& mine = dec.terms[first_term[c] + k];
            if (r.conjugate < 0) {
                mine.a = cplx(mine.a.real(), 0.0);
            } else if (static_cast<std::size_t>(r.conjugate) > c) {
                ARTerm& other = dec.terms[first_term[static_cast<std::size_t>(r.conjugate)] + k];
                const cplx avg = 0.5 * (mine.a + std::conj(other.a));
                mine.a = avg;
                other.a = std::conj(avg);
            }
        }
    }

    for (Eigen::Index t = 0; t < n; ++t) {
        dec.solve_residual = std::max(
            dec.solve_residual, std::abs(dec.eval_complex(t) - dec.initial_run[static_cast<std::size_t>(t)]));
    }
    return dec;
}

ARDecomposition solve_coefficients(const ARSpec& spec, const RootSet& roots) {
    if (classify(roots) == Boundedness::Unbounded) {
        throw RefusedUnbounded("spec is unbounded (a root outside the unit disk or a repeated unit root)");
    }
    return closed_form_terms(spec, roots);
}

double AlmostPeriodicPart::operator()(long long t) const {
    cplx s = 0.0;
    for (const ApComponent& c : components) s += c.coefficient * power(c.mu, t);
    return s.real();
}

double DecayPart::operator()(long long t) const {
    cplx s = 0.0;
    for (const ARTerm& term : terms) s += term_value(term, t);
    return s.real();
}

SplitResult split(const ARDecomposition& dec) {
    SplitResult out;
    for (const ARTerm& term : dec.terms) {
        switch (term.kind) {
            case TermKind::AlmostPeriodic:
                out.ap.components.push_back({std::arg(term.mu), term.mu, term.a});
                break;
            case TermKind::Decaying:
                out.remainder.terms.push_back(term);
                break;
            case TermKind::Transient:
                out.transient.terms.push_back(term);
                break;
            case TermKind::Growing:
                throw RefusedUnbounded("cannot split an unbounded decomposition");
        }
    }
    return out;
}

DecompositionCheck verify_decomposition(const ARSpec& spec, const ARDecomposition& dec,
                                        std::size_t horizon) {
    DecompositionCheck chk;
    chk.horizon = horizon;
    const std::vector<double> z = ar_recursion(spec, horizon);
    const SplitResult parts = split(dec);

    std::size_t transient_span = 0;
    for (const ARTerm& term : parts.transient.terms) transient_span = std::max(transient_span, term.k + 1);
    for (const ARTerm& term : parts.remainder.terms) {
        chk.rho = std::max(chk.rho, std::abs(term.mu));
        chk.envelope_C += std::abs(term.a);
    }

    for (std::size_t t = 0; t <= horizon; ++t) {
        const auto tt = static_cast<long long>(t);
        const cplx closed = dec.eval_complex(tt);
        chk.max_closed_error = std::max(chk.max_closed_error, std::abs(z[t] - closed.real()));
        chk.max_imaginary = std::max(chk.max_imaginary, std::abs(closed.imag()));
        if (std::abs(z[t]) > 1.0 + kClampBand) chk.box_violated = true;
        if (t < transient_span) continue;

        const double gap = std::abs(z[t] - parts.ap(tt));
        // triangle-inequality envelope of R; equals C rho^t when all k = 0
        // and every decaying root has modulus rho
        double envelope = 0.0;
        for (const ARTerm& term : parts.remainder.terms) {
            const double tk = term.k == 0 ? 1.0 : std::pow(static_cast<double>(t), static_cast<double>(term.k));
            envelope += std::abs(term.a) * tk * std::pow(std::abs(term.mu), static_cast<double>(t));
        }
        if (gap > envelope * (1.0 + 1e-9) + 1e-9) chk.envelope_ok = false;
        const double cr = chk.envelope_C * std::pow(chk.rho, static_cast<double>(t));
        if (cr > 0.0) chk.max_envelope_ratio = std::max(chk.max_envelope_ratio, gap / cr);
    }
    chk.tail_gap = std::abs(z[horizon] - parts.ap(static_cast<long long>(horizon)));
    return chk;
}

}  // namespace aporbit
