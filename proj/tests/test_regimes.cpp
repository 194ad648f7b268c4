// Asymptotic formulas against the exact closed forms and against direct
// evaluation of their own defining expressions.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mazer/mesa.hpp"
#include "mazer/regimes.hpp"

using namespace mazer;

TEST_CASE("rabi emission") {
    // g tau = kappa L / (2 k); the first maximum sits at g tau = pi/2
    REQUIRE(rabi_emission({0, 100.0, 0.0, 100.0 * pi}) ==
            Catch::Approx(1.0).margin(1e-12));

    // direct evaluation at n=0, delta/g=2, g tau=1: sin^2(sqrt(2))/2
    const double expected = 0.5 * std::pow(std::sin(std::sqrt(2.0)), 2);
    REQUIRE(rabi_emission({0, 10.0, 2.0, 20.0}) ==
            Catch::Approx(expected).epsilon(1e-14));
    REQUIRE(expected == Catch::Approx(0.48784078203146186).epsilon(1e-14));

    // even in the detuning, bit for bit; vanishing amplitude at large detuning
    for (double d : {0.3, 1.0, 7.5}) {
        REQUIRE(rabi_emission({0, 10.0, d, 17.0}) ==
                rabi_emission({0, 10.0, -d, 17.0}));
    }
    REQUIRE(rabi_emission({0, 10.0, 1e4, 17.0}) < 1e-6);
}

TEST_CASE("hot limit: exact emission approaches the Rabi formula") {
    for (double k : {50.0, 100.0})
        for (double d : {0.0, 1.0, -1.0})
            for (int n : {0, 1})
                for (int i = 0; i < 10; ++i) {
                    const double L = pi + (100.0 * pi - pi) * i / 9.0;
                    const MazerParams p{n, k, d, L};
                    REQUIRE(std::abs(emission_probability(p) - rabi_emission(p)) <
                            1e-3);
                }
}

TEST_CASE("cold approximation at resonance equals the resonant cold formula") {
    for (double L : {6.0, 9.3, 14.0, pi * 3}) {
        const MazerParams p{0, 0.1, 0.0, L};
        const double got = cold_emission_approx(p).value;
        const double s = std::sin(L);
        const double expected =
            0.5 * (1.0 + 0.5 * std::sin(2.0 * L)) / (1.0 + 25.0 * s * s);
        REQUIRE(got == Catch::Approx(expected).margin(1e-12));
        // identical to the fit at resonance (k_b = k)
        REQUIRE(cold_emission_fit(p) == Catch::Approx(expected).margin(1e-12));
    }
    // exactly 1/2 on the resonance comb kappa_n L = m pi
    for (int m : {2, 3, 4})
        REQUIRE(cold_emission_approx({0, 0.1, 0.0, m * pi}).value ==
                Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("cold approximation near the first detuned resonance") {
    // at the predicted first peak for delta/g = -0.1 (kappa L = 3.0641), the
    // B(L)-corrected formula sits 0.039 above the exact curve and the
    // simplified fit within 2e-4 (both frozen from 50-digit evaluation)
    const DressedFrame f = dressed_frame(0, -0.1);
    const double pred = pi / std::sqrt(f.cot_theta);
    const MazerParams p{0, 0.1, -0.1, pred};
    const double exact = emission_probability(p);
    REQUIRE(exact == Catch::Approx(0.35614583).margin(1e-6));
    REQUIRE(std::abs(cold_emission_approx(p).value - exact) < 0.045);
    REQUIRE(std::abs(cold_emission_fit(p) - exact) < 1e-3);
}

TEST_CASE("fit tracks the exact curve over a cold sweep at delta/g = -0.5") {
    double worst = 0.0;
    for (double L = 5.0; L <= 40.0; L += 0.05) {
        const MazerParams p{0, 0.1, -0.5, L};
        worst = std::max(worst,
                         std::abs(cold_emission_fit(p) - emission_probability(p)));
    }
    REQUIRE(worst <= 0.05);
}

TEST_CASE("cold validity flags") {
    const ColdValidity ok = cold_emission_approx({0, 0.1, -0.1, 10.0}).validity;
    REQUIRE(ok.detuning_small);
    REQUIRE(ok.barrier_thick);
    REQUIRE(ok.length_short);
    REQUIRE(ok.all());
    REQUIRE_FALSE(cold_emission_approx({0, 0.1, -0.1, 3.0}).validity.barrier_thick);
    REQUIRE_FALSE(cold_emission_approx({0, 0.1, -0.5, 10.0}).validity.detuning_small);
    REQUIRE_FALSE(cold_emission_approx({0, 0.5, 0.0, 10.0}).validity.length_short);
    // blocked: value is zero, flags still reported
    REQUIRE(cold_emission_approx({0, 0.1, 0.02, 10.0}).value == 0.0);
    REQUIRE(cold_emission_fit({0, 0.1, 0.02, 10.0}) == 0.0);
}

TEST_CASE("peak report at resonance") {
    const PeakReport r = peak_report(0, 0.0, 0.1, 4);
    REQUIRE(r.positions_kappa_L.size() == 4);
    for (int m = 1; m <= 4; ++m)
        REQUIRE(r.positions_kappa_L[m - 1] == Catch::Approx(m * pi).epsilon(1e-15));
    REQUIRE(r.amplitude == Catch::Approx(0.5).epsilon(1e-15));
    REQUIRE(r.de_broglie_kappa == Catch::Approx(2.0 * pi).epsilon(1e-15));
    REQUIRE(r.finesse == Catch::Approx(1.0 / (0.2 * 0.2)).epsilon(1e-12));
    // L_m = m * lambda_dB / 2
    for (int m = 1; m <= 4; ++m)
        REQUIRE(r.positions_kappa_L[m - 1] ==
                Catch::Approx(m * r.de_broglie_kappa / 2.0).epsilon(1e-14));
}

TEST_CASE("detuning moves finesse and amplitude the documented way") {
    const PeakReport minus = peak_report(0, -0.1, 0.1, 1);
    const PeakReport zero = peak_report(0, 0.0, 0.1, 1);
    const PeakReport plus = peak_report(0, 0.005, 0.1, 1);
    // positive detuning slows the emitted atom (k_b < k): sharper peaks
    REQUIRE(plus.finesse > zero.finesse);
    REQUIRE(minus.finesse < zero.finesse);
    // the amplitude is the step-transmission factor, dropping to zero at
    // the blocking threshold delta/g -> (k/kappa)^2
    REQUIRE(minus.amplitude < 0.5);
    REQUIRE(plus.amplitude < 0.5);
    REQUIRE(peak_report(0, 0.009, 0.1, 1).amplitude <
            peak_report(0, 0.005, 0.1, 1).amplitude);
    REQUIRE(peak_report(0, 0.02, 0.1, 1).amplitude == 0.0);
}

TEST_CASE("predicted peak positions track the located maxima") {
    // within half the measured local peak width over kappa L in [2, 40]
    for (double d : {0.0, -0.1}) {
        const MazerParams base{0, 0.1, d, 0.0};
        const auto located = locate_emission_peaks(base, 2.0, 40.0);
        REQUIRE(located.size() >= 12);
        const PeakReport rep = peak_report(0, d, 0.1, 13);
        // measured half width at half maximum of the first peak
        const double hwhm = d == 0.0 ? 0.204 : 0.454;
        for (const auto& peak : located) {
            double best = 1e9;
            for (double pred : rep.positions_kappa_L)
                best = std::min(best, std::abs(peak.kappa_L - pred));
            REQUIRE(best < hwhm);
        }
        // the first prediction is good to 0.1 for both detunings
        REQUIRE(std::abs(located.front().kappa_L - rep.positions_kappa_L.front()) <
                0.1);
    }
}

TEST_CASE("peak heights follow the step-transmission amplitude") {
    for (double d : {0.0, -0.1, 0.005, -0.05}) {
        const MazerParams base{0, 0.1, d, 0.0};
        const PeakReport rep = peak_report(0, d, 0.1, 1);
        for (const auto& peak : locate_emission_peaks(base, 2.0, 40.0))
            REQUIRE(std::abs(peak.value - rep.amplitude) < 0.02);
    }
}

TEST_CASE("cold emission is strongly asymmetric in the detuning sign") {
    // +0.05 is beyond the blocking threshold (k/kappa)^2 = 0.01, -0.05 is a
    // healthy resonance: the Rabi formula is symmetric, the exact cold
    // emission is not remotely so
    const auto peaks = locate_emission_peaks({0, 0.1, -0.05, 0.0}, 2.9, 3.4);
    REQUIRE(!peaks.empty());
    const double at_minus = peaks.front().value;
    REQUIRE(at_minus == Catch::Approx(0.4241779746).margin(1e-6));
    const double at_plus =
        emission_probability({0, 0.1, 0.05, peaks.front().kappa_L});
    REQUIRE(at_plus == 0.0);
    REQUIRE(std::abs(at_plus - at_minus) > 0.1);
}

TEST_CASE("cold detuning bounds") {
    const DetuningBounds b = cold_detuning_bounds(0, 0.1);
    REQUIRE(b.delta_min_over_g == Catch::Approx(-100.0).margin(1e-12));
    REQUIRE(b.delta_max_over_g == Catch::Approx(0.01).margin(1e-15));

    const DetuningBounds unity = cold_detuning_bounds(0, 1.0);
    REQUIRE(unity.delta_min_over_g == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE(unity.delta_max_over_g == Catch::Approx(1.0).margin(1e-14));

    // direct substitution at n = 3: -(n+1)/k^2 and k^2
    const DetuningBounds n3 = cold_detuning_bounds(3, 0.1);
    REQUIRE(n3.delta_min_over_g == Catch::Approx(-400.0).margin(1e-9));
    REQUIRE(n3.delta_max_over_g == Catch::Approx(0.01).margin(1e-15));
}
