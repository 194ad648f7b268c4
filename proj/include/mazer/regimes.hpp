#pragma once

// Asymptotic emission formulas and peak analysis.
//
// Hot atoms (kinetic energy far above the interior barrier) reduce to the
// classical Rabi oscillation with transit time tau = mL/(hbar k), i.e.
// g*tau = (kappa L)(kappa/k)/2 in dimensionless form. Cold atoms show
// Airy-like transmission resonances whose position, amplitude and width
// follow from the propagating |-,n> component alone.

#include <cmath>
#include <vector>

#include "mazer/core.hpp"
#include "mazer/mesa.hpp"

namespace mazer {

/// Classical Rabi emission probability with the detuned flopping frequency,
/// [1 + (delta/Omega_n)^2]^-1 sin^2( g tau sqrt((Omega_n/g)^2 + (delta/g)^2) / 2 ).
/// Valid advisory: hot regime, where k_b ~ k and reflections are negligible.
inline double rabi_emission(const MazerParams& p) {
    p.validate();
    const double omega = 2.0 * std::sqrt(double(p.n + 1));
    const double d = p.delta_over_g;
    const double g_tau = 0.5 * p.kappa_L / p.k_over_kappa;
    const double ratio = d / omega;
    const double s = std::sin(0.5 * g_tau * std::sqrt(omega * omega + d * d));
    return s * s / (1.0 + ratio * ratio);
}

/// Advisory validity flags of the cold-regime formulas, evaluated as
/// |delta|/Omega_n < 0.2, kappa_n L > 5 and kappa_n L < (kappa_n/k)^2.
struct ColdValidity {
    bool detuning_small;   // |delta|/Omega_n < 0.2
    bool barrier_thick;    // exp(kappa_n L) >> 1, as kappa_n L > 5
    bool length_short;     // kappa_n L < (kappa_n/k)^2
    bool all() const { return detuning_small && barrier_thick && length_short; }
};

inline ColdValidity cold_validity(const MazerParams& p) {
    const double omega = 2.0 * std::sqrt(double(p.n + 1));
    const double kn = std::pow(double(p.n + 1), 0.25);
    const double knL = kn * p.kappa_L;
    const double ratio = kn / p.k_over_kappa;
    return {std::abs(p.delta_over_g) / omega < 0.2, knL > 5.0, knL < ratio * ratio};
}

struct ColdEmission {
    double value;
    ColdValidity validity;
};

/// Cold-regime emission probability with the exact resonance prefactor
/// B(L) built from the k_c/k_t kernels shared with the mesa closed forms.
/// Returns 0 in the blocked region. Raises SingularKernel on kernel poles.
inline ColdEmission cold_emission_approx(const MazerParams& p) {
    p.validate();
    const ColdValidity flags = cold_validity(p);
    const double k = p.k_over_kappa;
    if (k * k <= p.delta_over_g || p.kappa_L == 0.0) return {0.0, flags};

    const MesaKernels ker(p);
    const DressedFrame& f = ker.frame();
    const double kn = std::pow(double(p.n + 1), 0.25);
    const double arg = kn * std::sqrt(f.cot_theta) * p.kappa_L;
    const double s = std::sin(arg);
    const double ratio = kn / (2.0 * k);
    const double num = 1.0 + 0.5 * f.cot_theta * std::sin(2.0 * arg);
    const double den = 1.0 + ratio * ratio * f.cot_theta * s * s;
    return {0.5 * ker.b_factor() * num / den, flags};
}

/// Airy-like fit of the cold-regime emission: potential-step transmission
/// prefactor 2(k_b/k)/(1+k_b/k)^2 and finesse (kappa_n/(k_b+k))^2.
/// Returns 0 in the blocked region.
inline double cold_emission_fit(const MazerParams& p) {
    p.validate();
    const double k = p.k_over_kappa;
    if (k * k <= p.delta_over_g) return 0.0;
    const DressedFrame f = dressed_frame(p.n, p.delta_over_g);
    const double kb = std::sqrt(k * k - p.delta_over_g);
    const double kn = std::pow(double(p.n + 1), 0.25);
    const double arg = kn * std::sqrt(f.cot_theta) * p.kappa_L;
    const double s = std::sin(arg);
    const double fin = kn / (kb + k);
    const double pref = 2.0 * (kb / k) / ((1.0 + kb / k) * (1.0 + kb / k));
    return pref * (1.0 + 0.5 * std::sin(2.0 * arg)) / (1.0 + fin * fin * s * s);
}

/// Cold-regime resonance comb: positions where the cavity length fits a
/// multiple of half the interior de Broglie wavelength, the common peak
/// amplitude, and the finesse controlling the width.
struct PeakReport {
    std::vector<double> positions_kappa_L;  // kappa L = m pi / (kappa_n sqrt(cot theta))
    double amplitude;                       // (1/2) 4(k_b/k)/(1+k_b/k)^2, 0 when blocked
    double finesse;                         // (kappa_n/(k_b+k))^2
    double de_broglie_kappa;                // lambda_dB in units of 1/kappa
};

inline PeakReport peak_report(int n, double delta_over_g, double k_over_kappa,
                              int m_max) {
    if (m_max < 1) throw std::invalid_argument("peak_report: m_max must be >= 1");
    MazerParams p{n, k_over_kappa, delta_over_g, 0.0};
    p.validate();
    const DressedFrame f = dressed_frame(n, delta_over_g);
    const double kn = std::pow(double(n + 1), 0.25);
    const double comb = pi / (kn * std::sqrt(f.cot_theta));

    PeakReport r;
    r.positions_kappa_L.reserve(m_max);
    for (int m = 1; m <= m_max; ++m) r.positions_kappa_L.push_back(m * comb);
    r.de_broglie_kappa = 2.0 * comb;

    const double k = k_over_kappa;
    const bool blocked = k * k <= delta_over_g;
    // At and beyond the blocking threshold no flux leaves in the b channel;
    // the b wave contributes no propagating momentum to the width either.
    const double kb = blocked ? 0.0 : std::sqrt(k * k - delta_over_g);
    r.amplitude = blocked ? 0.0 : 0.5 * 4.0 * (kb / k) / ((1.0 + kb / k) * (1.0 + kb / k));
    r.finesse = (kn / (kb + k)) * (kn / (kb + k));
    return r;
}

/// Detuning window of the cold regime at fixed k/kappa:
/// below -sqrt(n+1)(kappa_n/k)^2 the interior barrier drops under the
/// kinetic energy; at and above (k/kappa)^2 the emission is blocked.
struct DetuningBounds {
    double delta_min_over_g;
    double delta_max_over_g;
};

inline DetuningBounds cold_detuning_bounds(int n, double k_over_kappa) {
    if (!(k_over_kappa > 0.0))
        throw std::invalid_argument("cold_detuning_bounds: k_over_kappa must be > 0");
    const double kn = std::pow(double(n + 1), 0.25);
    const double ratio = kn / k_over_kappa;
    return {-std::sqrt(double(n + 1)) * ratio * ratio,
            k_over_kappa * k_over_kappa};
}

/// A numerically located local maximum of the exact emission curve.
struct LocatedPeak {
    double kappa_L;
    double value;
};

/// Grid scan (step 0.01) of the exact emission probability over
/// [lo, hi] in kappa L, with golden-section refinement of each interior
/// local maximum. Used to cross-check the peak-position formula.
inline std::vector<LocatedPeak> locate_emission_peaks(const MazerParams& base,
                                                      double lo, double hi,
                                                      double grid_step = 0.01) {
    if (!(hi > lo) || !(grid_step > 0.0))
        throw std::invalid_argument("locate_emission_peaks: bad range");
    const auto eval = [&base](double L) {
        MazerParams p = base;
        p.kappa_L = L;
        return emission_probability(p);
    };
    const int steps = int((hi - lo) / grid_step) + 1;
    std::vector<double> val(steps);
    for (int i = 0; i < steps; ++i) val[i] = eval(lo + i * grid_step);

    std::vector<LocatedPeak> peaks;
    constexpr double golden = 0.6180339887498949;
    for (int i = 1; i + 1 < steps; ++i) {
        if (!(val[i] > val[i - 1] && val[i] >= val[i + 1])) continue;
        if (val[i] <= 1e-9) continue;
        double a = lo + (i - 1) * grid_step;
        double b = lo + (i + 1) * grid_step;
        double c = b - golden * (b - a);
        double d = a + golden * (b - a);
        double fc = eval(c), fd = eval(d);
        while (b - a > 1e-9) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - golden * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + golden * (b - a);
                fd = eval(d);
            }
        }
        const double x = 0.5 * (a + b);
        peaks.push_back({x, eval(x)});
    }
    return peaks;
}

} // namespace mazer
