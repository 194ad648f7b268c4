#pragma once

// Exact closed-form scattering amplitudes for the mesa mode function
// (u(z) = 1 inside the cavity, 0 elsewhere).
//
// The excited atom |a,n> comes in from the left with wavenumber k and leaves
// either still excited (amplitudes rho_a, tau_a at wavenumber k) or de-excited
// |b,n+1> having deposited one photon (amplitudes rho_b, tau_b at wavenumber
// k_b). The interior solution mixes the two dressed components with
// wavenumbers k+ and k-, and matching the wave function and its derivative at
// both cavity faces yields closed forms built from a family of helper
// kernels: tau/rho/Sigma/Delta of either dressed branch evaluated at an
// exterior wavenumber, four modified tau variants, the interference kernels
// u_n, v_n and S+-, and the resonance denominators k_c(L), k_t(L).
//
// All kernels accept complex interior/exterior wavenumbers, so propagating
// and tunneling (evanescent) regimes share one code path through complex
// sin/cos. Denominators carry a relative epsilon guard of 1e-13: a parameter
// point landing on a kernel pole raises SingularKernel instead of returning
// a wrong finite number.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mazer/core.hpp"
#include "mazer/errors.hpp"

namespace mazer {

/// Complex scattering amplitudes (rho_a, tau_a) for the excited channel and
/// (rho_b, tau_b) for the photon-emitted channel.
struct ScatteringAmplitudes {
    complex rho_a;  // reflected, still excited
    complex tau_a;  // transmitted, still excited
    complex rho_b;  // reflected, photon emitted
    complex tau_b;  // transmitted, photon emitted
};

/// Flux-normalized channel probabilities; they sum to one.
struct ChannelProbabilities {
    double r_a, t_a, r_b, t_b;
    double sum() const { return r_a + t_a + r_b + t_b; }
};

namespace detail {
inline constexpr double singular_eps = 1e-13;

inline complex div_guarded(const complex& num, const complex& den, double scale,
                           const char* what) {
    if (std::abs(den) < singular_eps * scale) throw SingularKernel(what);
    return num / den;
}
} // namespace detail

/// The closed-form helper-kernel family for one parameter set. The interior
/// branch is selected with sign = +1 (the |+,n> component, wavenumber k+) or
/// sign = -1 (the |-,n> component, wavenumber k-); the kernel argument q is
/// an exterior wavenumber, k or k_b.
class MesaKernels {
public:
    explicit MesaKernels(const MazerParams& p)
        : frame_(dressed_frame(p.n, p.delta_over_g)),
          waves_(channel_wavenumbers(p)),
          L_(p.kappa_L) {
        k_ = waves_.k;
        kb_ = waves_.k_b;
        kp_ = waves_.k_plus;
        km_ = waves_.k_minus;
        if (std::abs(kb_) < detail::singular_eps * k_)
            throw SingularKernel("k_b at the emission threshold");
        if (std::abs(kp_) == 0.0)
            throw SingularKernel("k+ exactly at the critical point");
        // cosh(|Im k+| L) overflows past ~709; the transfer-matrix solver
        // stays valid there (its exponentials are all decaying).
        if (kp_.imag() * L_ > 690.0)
            throw SingularKernel("tunneling depth beyond double range");
        sp_ = std::sin(kp_ * L_);
        cp_ = std::cos(kp_ * L_);
        sm_ = std::sin(km_ * L_);
        cm_ = std::cos(km_ * L_);
        cos2_ = frame_.cos_theta * frame_.cos_theta;
        sin2_ = frame_.sin_theta * frame_.sin_theta;
        sin_2t_ = 2.0 * frame_.sin_theta * frame_.cos_theta;
        cos_2t_ = cos2_ - sin2_;
    }

    const DressedFrame& frame() const { return frame_; }
    const ChannelWavenumbers& waves() const { return waves_; }
    double interaction_length() const { return L_; }

    complex k_int(int sign) const { return sign > 0 ? kp_ : km_; }
    complex sin_kL(int sign) const { return sign > 0 ? sp_ : sm_; }
    complex cos_kL(int sign) const { return sign > 0 ? cp_ : cm_; }

    // Sigma(q) = (k_s/q + q/k_s)/2 and Delta(q) = (k_s/q - q/k_s)/2
    complex sigma(int sign, const complex& q) const {
        const complex ks = k_int(sign);
        return 0.5 * (ks / q + q / ks);
    }
    complex delta_kernel(int sign, const complex& q) const {
        const complex ks = k_int(sign);
        return 0.5 * (ks / q - q / ks);
    }

    // tau(q) = [cos(k_s L) - i Sigma(q) sin(k_s L)]^-1; never zero, but its
    // defining denominator can cancel, hence the guard.
    complex tau(int sign, const complex& q) const {
        return inv_den(sign, sigma(sign, q), "tau kernel denominator");
    }
    complex rho(int sign, const complex& q) const {
        return complex{0.0, 1.0} * delta_kernel(sign, q) * sin_kL(sign) * tau(sign, q);
    }

    // Modified transmissions entering the detuned amplitudes.
    complex tau_prime(int sign) const {
        return inv_den(sign, (kb_ / k_) * sigma(sign, complex{k_, 0.0}),
                       "tau' kernel denominator");
    }
    complex tau_dprime(int sign) const {
        return inv_den(sign, (k_ / kb_) * sigma(sign, complex{k_, 0.0}),
                       "tau'' kernel denominator");
    }
    complex sigma_tilde(int sign) const {
        const complex ks = k_int(sign);
        return ks / (k_ + kb_) + (kb_ / (k_ + kb_)) * (k_ / ks);
    }
    complex tau_tilde(int sign) const {
        return inv_den(sign, sigma_tilde(sign), "tau~ kernel denominator");
    }
    complex tau_bar(int sign) const {
        return inv_den(sign, ((k_ + kb_) / (2.0 * kb_)) * sigma(sign, complex{k_, 0.0}),
                       "tau- kernel denominator");
    }

    // Interference kernels.
    complex s_plus_minus() const {
        return sp_ * sm_ * (km_ / kp_ + kp_ / km_) + 2.0 * (cm_ * cp_ - 1.0);
    }
    complex u_kernel() const {
        const complex prod = sp_ * sm_;
        const complex ratio =
            detail::div_guarded(s_plus_minus(), prod, 1.0 + std::abs(prod),
                                "u kernel: sin(k+L) sin(k-L)");
        return sin2_ * ratio + (km_ * kp_ / (k_ * k_) - k_ * k_ / (km_ * kp_));
    }
    complex v_kernel() const {
        return complex{0.0, 1.0} * ((kp_ / k_) * sp_ * cm_ - (km_ / k_) * sm_ * cp_) -
               0.5 * cos_2t_ * s_plus_minus();
    }

    // Resonance denominators. cot_half/tan_half are k_s cot(k_s L/2) and
    // k_s tan(k_s L/2); both are real-valued for either real or evanescent
    // k_s, so the k_c/k_t numerator factors never vanish away from guards.
    complex cot_half(int sign) const {
        const complex x = k_int(sign) * L_ * 0.5;
        const complex s = std::sin(x);
        return detail::div_guarded(k_int(sign) * std::cos(x), s, 1.0 + std::abs(s),
                                   "cot(k L/2) pole");
    }
    complex tan_half(int sign) const {
        const complex x = k_int(sign) * L_ * 0.5;
        const complex c = std::cos(x);
        return detail::div_guarded(k_int(sign) * std::sin(x), c, 1.0 + std::abs(c),
                                   "tan(k L/2) pole");
    }
    complex k_c() const {
        const complex cm = cot_half(-1), cp = cot_half(+1);
        const complex num = complex{0.0, 1.0} * (k_ + complex{0.0, 1.0} * cm) *
                            (kb_ + complex{0.0, 1.0} * cp);
        return detail::div_guarded(num, cm - cp, std::abs(cm) + std::abs(cp),
                                   "k_c pole");
    }
    complex k_t() const {
        const complex tm = tan_half(-1), tp = tan_half(+1);
        const complex num = complex{0.0, 1.0} * (k_ - complex{0.0, 1.0} * tm) *
                            (kb_ - complex{0.0, 1.0} * tp);
        return detail::div_guarded(num, tp - tm, std::abs(tp) + std::abs(tm),
                                   "k_t pole");
    }

    // cos^2(theta) (k - k_b) / k_c, written with the reciprocal expanded so a
    // pole of k_c (where this term just vanishes) cannot overflow.
    complex d_term_c() const {
        const complex cm = cot_half(-1), cp = cot_half(+1);
        const complex den = complex{0.0, 1.0} * (k_ + complex{0.0, 1.0} * cm) *
                            (kb_ + complex{0.0, 1.0} * cp);
        return detail::div_guarded(cos2_ * (k_ - kb_) * (cm - cp), den,
                                   k_ * (std::abs(kb_) + std::abs(cp)),
                                   "k_c numerator zero");
    }
    complex d_term_t() const {
        const complex tm = tan_half(-1), tp = tan_half(+1);
        const complex den = complex{0.0, 1.0} * (k_ - complex{0.0, 1.0} * tm) *
                            (kb_ - complex{0.0, 1.0} * tp);
        return detail::div_guarded(cos2_ * (k_ - kb_) * (tp - tm), den,
                                   k_ * (std::abs(kb_) + std::abs(tp)),
                                   "k_t numerator zero");
    }

    /// Common denominator of all four amplitudes.
    complex d_factor() const {
        const complex d = (d_term_c() - 1.0) * (d_term_t() - 1.0);
        if (std::abs(d) < detail::singular_eps)
            throw SingularKernel("amplitude denominator");
        return d;
    }

    /// (k_b/k) / |D|^2 prefactor of the cold-regime emission formula.
    /// Meaningful only when the b channel propagates.
    double b_factor() const {
        const complex d = d_factor();
        return (kb_.real() / k_) / std::norm(d);
    }

    double cos2_theta() const { return cos2_; }
    double sin2_theta() const { return sin2_; }
    double sin_two_theta() const { return sin_2t_; }
    double k() const { return k_; }
    complex k_b() const { return kb_; }

private:
    complex inv_den(int sign, const complex& coef, const char* what) const {
        const complex c = cos_kL(sign);
        const complex s = sin_kL(sign);
        const complex den = c - complex{0.0, 1.0} * coef * s;
        const double scale = std::abs(c) + std::abs(coef * s);
        if (std::abs(den) < detail::singular_eps * scale) throw SingularKernel(what);
        return 1.0 / den;
    }

    DressedFrame frame_;
    ChannelWavenumbers waves_;
    double L_;
    double k_;
    complex kb_, kp_, km_;
    complex sp_, cp_, sm_, cm_;
    double cos2_, sin2_, sin_2t_, cos_2t_;
};

/// Exact mesa amplitudes from the closed forms. A zero-length cavity
/// transmits the excited atom unchanged. Raises SingularKernel on kernel
/// poles (see MesaKernels).
inline ScatteringAmplitudes mesa_amplitudes(const MazerParams& p) {
    p.validate();
    if (p.kappa_L == 0.0) return {0.0, 1.0, 0.0, 0.0};

    const MesaKernels ker(p);
    const double k = ker.k();
    const complex kb = ker.k_b();
    const double c2 = ker.cos2_theta();
    const double s2 = ker.sin2_theta();
    const double s2t = ker.sin_two_theta();

    const complex sp = ker.sin_kL(+1);
    const complex sm = ker.sin_kL(-1);
    const complex tau_m_k = ker.tau(-1, complex{k, 0.0});
    const complex tau_m_kb = ker.tau(-1, kb);
    const complex tau_p_kb = ker.tau(+1, kb);
    const complex rho_m_k = ker.rho(-1, complex{k, 0.0});
    const complex del_p_k = ker.delta_kernel(+1, complex{k, 0.0});
    const complex D = ker.d_factor();
    const complex i{0.0, 1.0};

    // rho+-(q) = i Delta+-(q) sin(k+- L) tau+-(q), so every
    // rho / Delta ratio below is evaluated as i sin(k+- L) tau+-(q); the
    // Delta factors drop out identically (they can get arbitrarily small at
    // large positive detuning, where k+ approaches k_b, without any pole).
    const complex rho_over_del_p_kb = i * sp * tau_p_kb;

    ScatteringAmplitudes a;
    a.tau_a = (c2 * (tau_m_k / tau_m_kb) * tau_p_kb + s2 * tau_m_k) / D;

    // Third term of rho_a: (cos^2/4)(kb/k - k/kb) u_n rho- rho+ / (Delta- Delta+)
    // with the sin(k+L) sin(k-L) division inside u_n cancelled exactly.
    const complex kp = ker.k_int(+1);
    const complex km = ker.k_int(-1);
    const complex u_times_pair =
        -(s2 * ker.s_plus_minus() +
          (km * kp / (k * k) - k * k / (km * kp)) * sp * sm) *
        tau_m_k * tau_p_kb;
    a.rho_a = (c2 * (tau_m_k / ker.tau_prime(-1)) * del_p_k * rho_over_del_p_kb +
               (1.0 - c2 * tau_p_kb / ker.tau_dprime(+1)) * rho_m_k +
               0.25 * c2 * (kb / k - k / kb) * u_times_pair) /
              D;

    a.tau_b = 0.25 * s2t * (1.0 + k / kb) *
              ((tau_m_k / ker.tau_tilde(-1)) * tau_p_kb -
               (tau_p_kb / ker.tau_tilde(+1)) * tau_m_k) /
              D;

    a.rho_b = s2t *
              (0.5 * (tau_m_k / ker.tau_bar(-1)) * del_p_k * rho_over_del_p_kb -
               0.5 * (tau_p_kb / ker.tau_bar(+1)) * rho_m_k +
               0.25 * (k / kb - 1.0) * ker.v_kernel() * tau_m_k * tau_p_kb) /
              D;
    return a;
}

/// Flux-normalized probabilities. The de-excited channel carries the flux
/// factor k_b/k and contributes nothing when k_b is evanescent or exactly at
/// threshold.
inline ChannelProbabilities probabilities(const ScatteringAmplitudes& a,
                                          const ChannelWavenumbers& w) {
    ChannelProbabilities p;
    p.r_a = std::norm(a.rho_a);
    p.t_a = std::norm(a.tau_a);
    if (w.b_propagating()) {
        const double flux = w.k_b.real() / w.k;
        p.r_b = flux * std::norm(a.rho_b);
        p.t_b = flux * std::norm(a.tau_b);
    } else {
        p.r_b = 0.0;
        p.t_b = 0.0;
    }
    return p;
}

/// Induced emission probability of one photon inside the cavity,
/// r_b + t_b. Identically zero in the blocked region k/kappa <= sqrt(delta/g)
/// where the kinetic energy cannot pay for the potential step.
inline double emission_probability(const MazerParams& p) {
    p.validate();
    if (p.k_over_kappa * p.k_over_kappa <= p.delta_over_g) return 0.0;
    const ChannelProbabilities probs =
        probabilities(mesa_amplitudes(p), channel_wavenumbers(p));
    return probs.r_b + probs.t_b;
}

/// Resonant amplitudes from the half-sum forms
/// tau_a = (tau+ + tau-)/2, rho_a = (rho+ + rho-)/2,
/// tau_b = (tau+ - tau-)/2, rho_b = (rho+ - rho-)/2.
/// Valid only at delta = 0; kept as an independent assembly path for
/// cross-validation of the general closed forms.
inline ScatteringAmplitudes resonant_amplitudes(const MazerParams& p) {
    p.validate();
    if (p.delta_over_g != 0.0)
        throw std::invalid_argument("resonant_amplitudes requires delta/g = 0");
    if (p.kappa_L == 0.0) return {0.0, 1.0, 0.0, 0.0};
    const MesaKernels ker(p);
    const complex q{ker.k(), 0.0};
    const complex tau_p = ker.tau(+1, q);
    const complex tau_m = ker.tau(-1, q);
    const complex rho_p = ker.rho(+1, q);
    const complex rho_m = ker.rho(-1, q);
    return {0.5 * (rho_p + rho_m), 0.5 * (tau_p + tau_m),
            0.5 * (rho_p - rho_m), 0.5 * (tau_p - tau_m)};
}

} // namespace mazer
