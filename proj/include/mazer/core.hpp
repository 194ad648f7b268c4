#pragma once

// Dimensionless parameterization, dressed-state geometry and channel
// wavenumbers for a two-level atom crossing a single-mode cavity with
// quantized center-of-mass motion.
//
// Unit system: momenta in units of kappa (kappa^2 = 2mg/hbar), energies in
// units of hbar*g, lengths in units of 1/kappa. With these choices the four
// numbers (n, k/kappa, delta/g, kappa*L) fully determine one scattering
// problem and the incident kinetic energy in hbar*g units is (k/kappa)^2.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mazer/errors.hpp"

namespace mazer {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// The four dimensionless numbers that define one scattering problem.
struct MazerParams {
    int n = 0;                  // cavity photon number (Fock state)
    double k_over_kappa = 1.0;  // incident atomic momentum, units of kappa
    double delta_over_g = 0.0;  // detuning (mode minus transition frequency), units of g
    double kappa_L = 0.0;       // interaction length, units of 1/kappa

    void validate() const {
        if (n < 0) throw std::invalid_argument("MazerParams: n must be >= 0");
        if (!(k_over_kappa > 0.0))
            throw std::invalid_argument("MazerParams: k_over_kappa must be > 0");
        if (!(kappa_L >= 0.0))
            throw std::invalid_argument("MazerParams: kappa_L must be >= 0");
        if (!std::isfinite(delta_over_g))
            throw std::invalid_argument("MazerParams: delta_over_g must be finite");
    }
};

/// Mixing angle theta_n of the dressed states together with its
/// trigonometric companions, the Rabi frequency Omega_n and
/// Lambda_n = sqrt(delta^2 + Omega_n^2) (both in units of g).
struct DressedFrame {
    double theta_n;    // in (0, pi/2)
    double omega_n;    // Omega_n / g = 2 sqrt(n+1)
    double lambda_n;   // Lambda_n / g
    double sin_theta;
    double cos_theta;
    double tan_theta;
    double cot_theta;
};

/// Channel wavenumbers in units of kappa. k_b, k_plus may be evanescent
/// (purely imaginary); k_minus is always propagating. Every complex value
/// is taken on the branch Re >= 0, Im >= 0 so that evanescent waves decay
/// away from the cavity.
struct ChannelWavenumbers {
    double k;          // incident |a,n> wavenumber
    complex k_b;       // |b,n+1> exterior wavenumber, k_b^2 = k^2 - delta/g
    complex k_plus;    // |+,n> interior wavenumber
    complex k_minus;   // |-,n> interior wavenumber
    double kappa_n;    // kappa_n / kappa = (n+1)^(1/4)

    /// True when the lower-state exterior channel carries flux.
    bool b_propagating() const { return k_b.imag() == 0.0 && k_b.real() > 0.0; }
};

/// Interior energies of the |+,n> and |-,n> components in units of hbar*g.
/// They satisfy v_plus + v_minus = delta/g.
struct StepEnergies {
    double v_plus;   // sqrt(n+1) tan(theta_n)
    double v_minus;  // -sqrt(n+1) cot(theta_n)
};

/// Square root of a real number on the fixed branch Re >= 0, Im >= 0.
inline complex sqrt_branch(double x_squared) {
    if (x_squared >= 0.0) return {std::sqrt(x_squared), 0.0};
    return {0.0, std::sqrt(-x_squared)};
}

/// Dressed-state geometry for photon number n and detuning delta/g.
///
/// Computed from the Lambda_n closed forms, which stay well conditioned for
/// |delta| >> Omega_n (no arctan of cot(2 theta) involved). theta_n is in
/// (0, pi/2), reaching pi/4 at resonance and pi/2 as delta -> +inf.
inline DressedFrame dressed_frame(int n, double delta_over_g) {
    if (n < 0) throw std::invalid_argument("dressed_frame: n must be >= 0");
    DressedFrame f;
    const double d = delta_over_g;
    f.omega_n = 2.0 * std::sqrt(double(n + 1));
    f.lambda_n = std::hypot(d, f.omega_n);
    // Lambda -+ delta on the cancelling side via the exact rational form
    // (Lambda^2 - delta^2)/(Lambda +- delta) = Omega^2/(Lambda +- delta),
    // so every frame quantity keeps full relative accuracy for |delta| >> Omega.
    const double lam_plus_d =
        d >= 0.0 ? f.lambda_n + d : f.omega_n * f.omega_n / (f.lambda_n - d);
    const double lam_minus_d =
        d >= 0.0 ? f.omega_n * f.omega_n / (f.lambda_n + d) : f.lambda_n - d;
    f.sin_theta = std::sqrt(lam_plus_d / (2.0 * f.lambda_n));
    f.cos_theta = std::sqrt(lam_minus_d / (2.0 * f.lambda_n));
    f.tan_theta = std::sqrt(lam_plus_d / lam_minus_d);
    f.cot_theta = std::sqrt(lam_minus_d / lam_plus_d);
    f.theta_n = std::atan2(f.sin_theta, f.cos_theta);
    return f;
}

/// All channel wavenumbers for one parameter set.
inline ChannelWavenumbers channel_wavenumbers(const MazerParams& p) {
    p.validate();
    const DressedFrame f = dressed_frame(p.n, p.delta_over_g);
    const double k = p.k_over_kappa;
    const double k2 = k * k;
    const double rn = std::sqrt(double(p.n + 1));  // kappa_n^2 / kappa^2
    ChannelWavenumbers w;
    w.k = k;
    w.kappa_n = std::pow(double(p.n + 1), 0.25);
    // At resonance k_b equals k identically; assign it directly so the
    // resonant reduction holds to the last bit.
    w.k_b = (p.delta_over_g == 0.0) ? complex{k, 0.0}
                                    : sqrt_branch(k2 - p.delta_over_g);
    w.k_plus = sqrt_branch(k2 - rn * f.tan_theta);
    w.k_minus = sqrt_branch(k2 + rn * f.cot_theta);
    return w;
}

/// Interior step energies of the dressed components, units of hbar*g.
inline StepEnergies step_energies(int n, double delta_over_g) {
    const DressedFrame f = dressed_frame(n, delta_over_g);
    const double rn = std::sqrt(double(n + 1));
    return {rn * f.tan_theta, -rn * f.cot_theta};
}

/// Critical ratio k/kappa_n separating the cold regime from the hot one:
/// the incident kinetic energy equals the interior energy v_plus there.
/// Equals sqrt(tan theta_n); 1 at resonance, growing with positive detuning.
inline double critical_k_ratio(int n, double delta_over_g) {
    return std::sqrt(dressed_frame(n, delta_over_g).tan_theta);
}

/// Detuning at which a fixed k/kappa sits exactly on the regime frontier.
/// Inverse of critical_k_ratio: delta/g = sqrt(n+1) [(k/kappa_n)^2 - (k/kappa_n)^-2].
inline double critical_detuning(int n, double k_over_kappa) {
    if (!(k_over_kappa > 0.0))
        throw std::invalid_argument("critical_detuning: k_over_kappa must be > 0");
    const double kappa_n = std::pow(double(n + 1), 0.25);
    const double r = k_over_kappa / kappa_n;
    return std::sqrt(double(n + 1)) * (r * r - 1.0 / (r * r));
}

enum class Regime { Blocked, Cold, Intermediate, Hot };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Blocked: return "blocked";
        case Regime::Cold: return "cold";
        case Regime::Intermediate: return "intermediate";
        case Regime::Hot: return "hot";
    }
    return "?";
}

/// Advisory classification. Blocked when the kinetic energy cannot pay for
/// the potential step (k/kappa <= sqrt(delta/g), positive detuning only);
/// otherwise cold/hot when k/kappa_n is a factor of 10 below/above the
/// critical ratio (boundary inclusive), intermediate in between. The factor
/// of 10 encodes the "much smaller / much larger" crossover; it never gates
/// any computation.
inline Regime classify_regime(const MazerParams& p) {
    p.validate();
    const double k = p.k_over_kappa;
    if (k * k <= p.delta_over_g) return Regime::Blocked;
    const double critical = critical_k_ratio(p.n, p.delta_over_g);
    const double ratio = k / std::pow(double(p.n + 1), 0.25);
    if (ratio <= 0.1 * critical) return Regime::Cold;
    if (ratio >= 10.0 * critical) return Regime::Hot;
    return Regime::Intermediate;
}

} // namespace mazer
