#include "aporbit/spectral.hpp"

#include <cmath>
#include <numbers>

#include "aporbit/error.hpp"

namespace aporbit {

namespace {

// cos/sin of 2 pi j / L for j = 0..L-1
struct UnitRoots {
    explicit UnitRoots(std::size_t L) : c(L), s(L) {
        for (std::size_t j = 0; j < L; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(L);
            c[j] = std::cos(angle);
            s[j] = std::sin(angle);
        }
    }
    std::vector<double> c, s;
};

}  // namespace

TrigForm fit_trig(const std::vector<std::vector<double>>& values, std::size_t pre_period) {
    const std::size_t L = values.size();
    if (L == 0) throw NotPeriodic("no period samples to fit");
    const std::size_t d = values.front().size();
    for (const auto& v : values) {
        if (v.size() != d) throw DimensionMismatch(d, v.size());
    }

    TrigForm f;
    f.period = L;
    f.phase_origin = pre_period;
    f.harmonics = L / 2;
    f.dim = d;
    f.a.assign(f.harmonics + 1, std::vector<double>(d, 0.0));
    f.b.assign(f.harmonics + 1, std::vector<double>(d, 0.0));

    // residue r = t mod L holds the sample at t = T + ((r - T) mod L)
    std::vector<const std::vector<double>*> by_residue(L);
    for (std::size_t r = 0; r < L; ++r) {
        by_residue[r] = &values[(r + L - pre_period % L) % L];
    }

    const UnitRoots roots(L);
    const double inv_L = 1.0 / static_cast<double>(L);
    for (std::size_t m = 0; m <= f.harmonics; ++m) {
        const bool edge = m == 0 || 2 * m == L;
        const double scale = edge ? inv_L : 2.0 * inv_L;
        for (std::size_t i = 0; i < d; ++i) {
            double sc = 0.0;
            double ss = 0.0;
            for (std::size_t r = 0; r < L; ++r) {
                const std::size_t j = (m * r) % L;
                const double v = (*by_residue[r])[i];
                sc += v * roots.c[j];
                ss += v * roots.s[j];
            }
            f.b[m][i] = scale * sc;
            f.a[m][i] = edge ? 0.0 : scale * ss;
        }
    }
    return f;
}

TrigForm fit_trig(const ChainResult& chain) {
    std::vector<std::vector<double>> values;
    values.reserve(chain.period);
    for (std::size_t s = 0; s < chain.period; ++s) {
        const Point p = chain.decoded_at(chain.pre_period + s);
        values.emplace_back(p.coords().begin(), p.coords().end());
    }
    return fit_trig(values, chain.pre_period);
}

std::vector<double> eval_trig(const TrigForm& form, long long t) {
    if (t < static_cast<long long>(form.phase_origin)) {
        throw BeforePhaseOrigin("t=" + std::to_string(t) + " precedes the phase origin T=" +
                                std::to_string(form.phase_origin));
    }
    const auto L = static_cast<unsigned long long>(form.period);
    const auto tr = static_cast<unsigned long long>(t) % L;
    std::vector<double> out(form.dim, 0.0);
    for (std::size_t m = 0; m <= form.harmonics; ++m) {
        // 2 pi m t / L reduced mod 2 pi exactly in integers
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((m * tr) % L) /
                             static_cast<double>(L);
        const double sn = std::sin(angle);
        const double cs = std::cos(angle);
        for (std::size_t i = 0; i < form.dim; ++i) out[i] += form.a[m][i] * sn + form.b[m][i] * cs;
    }
    return out;
}

double parseval_energy(const TrigForm& form, std::size_t coord) {
    double e = form.b[0][coord] * form.b[0][coord];
    for (std::size_t m = 1; m <= form.harmonics; ++m) {
        const double a = form.a[m][coord];
        const double b = form.b[m][coord];
        e += (2 * m == form.period) ? b * b : 0.5 * (a * a + b * b);
    }
    return e;
}

}  // namespace aporbit
