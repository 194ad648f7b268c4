// Dressed-state geometry, channel wavenumbers, step energies, regime
// classification. Expected values are either textbook resonance limits or
// independent closed-form evaluations written out in the assertions.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mazer/core.hpp"

using namespace mazer;

TEST_CASE("dressed frame at resonance") {
    const DressedFrame f = dressed_frame(0, 0.0);
    REQUIRE(f.theta_n == Catch::Approx(pi / 4).epsilon(1e-15));
    REQUIRE(f.omega_n == 2.0);
    REQUIRE(f.lambda_n == 2.0);
    REQUIRE(f.tan_theta == 1.0);
    REQUIRE(f.cot_theta == 1.0);

    const DressedFrame f3 = dressed_frame(3, 0.0);
    REQUIRE(f3.omega_n == 4.0);
    REQUIRE(f3.theta_n == Catch::Approx(pi / 4).epsilon(1e-15));
}

TEST_CASE("mixing angle grows monotonically to pi/2 with positive detuning") {
    double prev = dressed_frame(0, 0.0).theta_n;
    for (double d : {0.5, 2.0, 10.0, 1e3, 1e6}) {
        const double cur = dressed_frame(0, d).theta_n;
        REQUIRE(cur > prev);
        prev = cur;
    }
    REQUIRE(std::abs(dressed_frame(0, 1e8).theta_n - pi / 2) < 1e-3);
}

TEST_CASE("frame identities on a random parameter grid") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ud(-50.0, 50.0);
    std::uniform_int_distribution<int> un(0, 5);
    for (int i = 0; i < 2000; ++i) {
        const int n = un(rng);
        const double d = ud(rng);
        const DressedFrame f = dressed_frame(n, d);
        REQUIRE(f.theta_n > 0.0);
        REQUIRE(f.theta_n < pi / 2);
        REQUIRE(std::abs(f.sin_theta * f.sin_theta + f.cos_theta * f.cos_theta - 1.0) <
                1e-14);
        REQUIRE(std::abs(f.tan_theta * f.cot_theta - 1.0) < 1e-12);
        // cot(2 theta) = -delta/Omega as the cross-multiplied residual
        const double cos2t = f.cos_theta * f.cos_theta - f.sin_theta * f.sin_theta;
        const double sin2t = 2.0 * f.sin_theta * f.cos_theta;
        REQUIRE(std::abs(cos2t * f.omega_n + d * sin2t) < 1e-12 * (1.0 + std::abs(d)));
        // delta -> -delta swaps tan and cot (theta -> pi/2 - theta)
        const DressedFrame g = dressed_frame(n, -d);
        REQUIRE(std::abs(g.theta_n - (pi / 2 - f.theta_n)) < 1e-12);
        REQUIRE(std::abs(g.tan_theta - f.cot_theta) <
                1e-12 * (1.0 + f.cot_theta));
    }
}

TEST_CASE("channel wavenumbers: resonance and evanescent cases") {
    const ChannelWavenumbers w = channel_wavenumbers({0, 1.0, 0.0, 1.0});
    REQUIRE(w.k_b == complex{1.0, 0.0});
    REQUIRE(std::abs(w.k_plus) < 1e-12);
    REQUIRE(std::abs(w.k_minus - std::sqrt(2.0)) < 1e-15);
    REQUIRE(w.kappa_n == 1.0);
    REQUIRE(w.b_propagating());

    // k_b^2 = 0.25 - 0.5 < 0: evanescent lower channel
    const ChannelWavenumbers e = channel_wavenumbers({0, 0.5, 0.5, 1.0});
    REQUIRE(e.k_b.real() == 0.0);
    REQUIRE(e.k_b.imag() == Catch::Approx(0.5).epsilon(1e-15));
    REQUIRE_FALSE(e.b_propagating());

    // negative detuning speeds the emitted atom up: k_b = sqrt(k^2 + 0.1)
    const ChannelWavenumbers s = channel_wavenumbers({0, 0.1, -0.1, 1.0});
    REQUIRE(s.k_b.real() == Catch::Approx(std::sqrt(0.11)).epsilon(1e-15));
}

TEST_CASE("wavenumber branch rule and defining squares on a random grid") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uk(0.05, 50.0), u01(0.0, 1.0);
    std::uniform_int_distribution<int> un(0, 3);
    for (int i = 0; i < 2000; ++i) {
        MazerParams p{un(rng), uk(rng), 0.0, 1.0};
        p.delta_over_g = -20.0 + u01(rng) * (p.k_over_kappa * p.k_over_kappa + 25.0);
        const ChannelWavenumbers w = channel_wavenumbers(p);
        const DressedFrame f = dressed_frame(p.n, p.delta_over_g);
        const double k2 = p.k_over_kappa * p.k_over_kappa;
        const double rn = std::sqrt(double(p.n + 1));
        for (const complex q : {w.k_b, w.k_plus, w.k_minus}) {
            REQUIRE(q.real() >= 0.0);
            REQUIRE(q.imag() >= 0.0);
        }
        const double scale = k2 + rn * (f.tan_theta + f.cot_theta);
        REQUIRE(std::abs(w.k_b * w.k_b - (k2 - p.delta_over_g)) < 1e-12 * scale);
        REQUIRE(std::abs(w.k_plus * w.k_plus - (k2 - rn * f.tan_theta)) <
                1e-12 * scale);
        REQUIRE(std::abs(w.k_minus * w.k_minus - (k2 + rn * f.cot_theta)) <
                1e-12 * scale);
        // k-^2 - k_b^2 = kappa_n^2 tan(theta)
        REQUIRE(std::abs((w.k_minus * w.k_minus - w.k_b * w.k_b) - rn * f.tan_theta) <
                1e-12 * scale);
    }
}

TEST_CASE("step energies") {
    const StepEnergies r = step_energies(0, 0.0);
    REQUIRE(r.v_plus == Catch::Approx(1.0).epsilon(1e-15));
    REQUIRE(r.v_minus == Catch::Approx(-1.0).epsilon(1e-15));

    REQUIRE(std::abs(step_energies(0, 3.0).v_plus + step_energies(0, 3.0).v_minus -
                     3.0) < 1e-12);

    // (n=1, delta=-2): tan(theta) = (sqrt(3)-1)/sqrt(2), so
    // v+ = sqrt(3)-1 and v- = -(sqrt(3)+1)
    const StepEnergies s = step_energies(1, -2.0);
    REQUIRE(s.v_plus == Catch::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-14));
    REQUIRE(s.v_minus == Catch::Approx(-std::sqrt(3.0) - 1.0).epsilon(1e-14));

    // both closed forms agree: sin^2(theta) delta + sqrt(n+1) sin(2 theta)
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ud(-30.0, 30.0);
    for (int i = 0; i < 500; ++i) {
        const int n = i % 4;
        const double d = ud(rng);
        const DressedFrame f = dressed_frame(n, d);
        const StepEnergies e = step_energies(n, d);
        const double rn = std::sqrt(double(n + 1));
        const double alt = f.sin_theta * f.sin_theta * d +
                           rn * 2.0 * f.sin_theta * f.cos_theta;
        REQUIRE(std::abs(e.v_plus - alt) < 1e-12 * (1.0 + std::abs(alt)));
        REQUIRE(std::abs(e.v_plus + e.v_minus - d) < 1e-12 * (1.0 + std::abs(d)));
    }
}

TEST_CASE("critical ratio and critical detuning") {
    REQUIRE(critical_k_ratio(0, 0.0) == 1.0);

    // direct quartic-root evaluation at delta/g = 3
    const double s13 = std::sqrt(13.0);
    REQUIRE(critical_k_ratio(0, 3.0) ==
            Catch::Approx(std::pow((s13 + 3.0) / (s13 - 3.0), 0.25)).epsilon(1e-14));

    // grows without bound with positive detuning
    double prev = critical_k_ratio(0, 0.0);
    for (double d : {1.0, 10.0, 100.0, 1e4}) {
        const double cur = critical_k_ratio(0, d);
        REQUIRE(cur > prev);
        prev = cur;
    }

    REQUIRE(critical_detuning(0, 1.0) == 0.0);
    REQUIRE(critical_detuning(0, 1.01) ==
            Catch::Approx(0.03980395059307911).epsilon(1e-13));

    // inverse pair: critical_k_ratio(n, critical_detuning(n, k)) * kappa_n = k
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uk(0.05, 50.0);
    for (int i = 0; i < 500; ++i) {
        const int n = i % 4;
        const double k = uk(rng);
        const double kn = std::pow(double(n + 1), 0.25);
        const double back = critical_k_ratio(n, critical_detuning(n, k)) * kn;
        REQUIRE(std::abs(back - k) < 1e-10 * k);
    }
}

TEST_CASE("regime classification") {
    REQUIRE(classify_regime({0, 0.5, 0.5, 1.0}) == Regime::Blocked);
    REQUIRE(classify_regime({0, 0.1, 0.0, 1.0}) == Regime::Cold);
    REQUIRE(classify_regime({0, 100.0, 0.0, 1.0}) == Regime::Hot);
    REQUIRE(classify_regime({0, 1.0, 0.0, 1.0}) == Regime::Intermediate);
    // at the blocking threshold itself (k^2 == delta) the point is blocked
    REQUIRE(classify_regime({0, 1.0, 1.0, 1.0}) == Regime::Blocked);
    // blocked wins over any energy classification
    REQUIRE(classify_regime({0, 0.01, 0.2, 1.0}) == Regime::Blocked);
}

TEST_CASE("parameter validation") {
    REQUIRE_THROWS_AS((MazerParams{-1, 1.0, 0.0, 1.0}.validate()),
                      std::invalid_argument);
    REQUIRE_THROWS_AS((MazerParams{0, 0.0, 0.0, 1.0}.validate()),
                      std::invalid_argument);
    REQUIRE_THROWS_AS((MazerParams{0, 1.0, 0.0, -1.0}.validate()),
                      std::invalid_argument);
    REQUIRE_NOTHROW((MazerParams{2, 0.3, -5.0, 12.0}.validate()));
}
