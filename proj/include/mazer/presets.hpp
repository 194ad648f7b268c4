#pragma once

// Canned sweeps reproducing the standard emission-probability pictures:
//
//   fig3     p_em vs k/kappa at kappa L = 10 pi, delta/g in {0, 0.5}
//   fig4     p_em vs delta/g in the intermediate regime (k/kappa = 1.01)
//   fig5     p_em vs kappa L: a negative detuning against the equivalent
//            hotter resonant beam (same barrier-to-energy ratio)
//   fig6     p_em vs kappa L in the cold regime (k/kappa = 0.1), several
//            detunings
//   fig7     p_em vs (kappa L, delta/g) at k/kappa = 0.1, down to the cold
//            cooling bound delta/g = -100
//   peakamp  cold-regime resonance amplitude vs delta/g for two k/kappa,
//            measured on the refined second peak of the exact curve
//
// Each preset emits the standard CSV columns; multi-part presets append
// additional '#' spec lines between blocks.

#include <ostream>
#include <string>
#include <vector>

#include "mazer/regimes.hpp"
#include "mazer/sweep.hpp"

namespace mazer {

struct Preset {
    std::string name;
    std::vector<SweepSpec> parts;  // empty for the special peakamp preset
};

inline Preset make_preset(const std::string& name) {
    Preset preset{name, {}};
    if (name == "fig3") {
        SweepSpec s;
        s.base = {0, 1.0, 0.0, 10.0 * pi};
        s.axes = {AxisValues::list(Axis::DeltaOverG, {0.0, 0.5}),
                  AxisValues::linspace(Axis::KOverKappa, 0.01, 3.0, 1000)};
        preset.parts = {s};
    } else if (name == "fig4") {
        SweepSpec s;
        s.base = {0, 1.01, 0.0, 100.0};
        s.axes = {AxisValues::linspace(Axis::DeltaOverG, -1.0, 1.0, 1000)};
        preset.parts = {s};
    } else if (name == "fig5") {
        // Both parts keep (k/kappa)^2 / v_plus equal: detuning variation vs
        // kinetic-energy variation.
        SweepSpec detuned;
        detuned.base = {0, 1.01, -0.5, 0.0};
        detuned.axes = {AxisValues::linspace(Axis::KappaL, 0.0, 60.0, 1200)};
        SweepSpec resonant = detuned;
        resonant.base = {0, 1.1430310635206481, 0.0, 0.0};
        preset.parts = {detuned, resonant};
    } else if (name == "fig6") {
        SweepSpec s;
        s.base = {0, 0.1, 0.0, 0.0};
        s.axes = {AxisValues::list(Axis::DeltaOverG, {0.0, -0.1, 0.005}),
                  AxisValues::linspace(Axis::KappaL, 0.0, 40.0, 4001)};
        preset.parts = {s};
    } else if (name == "fig7") {
        SweepSpec s;
        s.base = {0, 0.1, 0.0, 0.0};
        s.axes = {AxisValues::linspace(Axis::KappaL, 0.0, 40.0, 401),
                  AxisValues::linspace(Axis::DeltaOverG, -100.0, 0.01, 401)};
        preset.parts = {s};
    } else if (name == "peakamp") {
        // handled by run_peak_amplitude_preset
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return preset;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig3", "fig4", "fig5",
                                                   "fig6", "fig7", "peakamp"};
    return names;
}

inline constexpr int peakamp_steps = 1021;
inline constexpr std::size_t peakamp_rows = 2 * peakamp_steps;

/// Resonance amplitude vs detuning: each row carries the exact channel
/// probabilities evaluated at the numerically refined second resonance
/// (kappa L column). Blocked rows sit on the predicted comb position with
/// p_em = 0.
inline std::size_t run_peak_amplitude_preset(std::ostream& out) {
    const std::vector<double> ks = {0.05, 0.1};
    const int steps = peakamp_steps;
    const double dmin = -1.0, dmax = 0.02;

    out << "# mazer " << version << "\n";
    out << "# preset=peakamp n=0 engine=closed_form peak_index=2"
           " axis=k_over_kappa[2:0.05..0.1] axis=delta_over_g["
        << steps << ":" << dmin << ".." << dmax << "]\n";
    out << "k_over_kappa,delta_over_g,kappa_L,r_a,t_a,r_b,t_b,p_em,error\n";

    struct Row {
        double k, d, L;
        SweepRow data;
    };
    std::vector<Row> rows(ks.size() * steps);
    detail::parallel_for(rows.size(), [&](std::size_t idx) {
        Row& row = rows[idx];
        row.k = ks[idx / steps];
        row.d = dmin + (dmax - dmin) * double(idx % steps) / double(steps - 1);
        const DressedFrame f = dressed_frame(0, row.d);
        const double comb = pi / std::sqrt(f.cot_theta);
        MazerParams p{0, row.k, row.d, 2.0 * comb};
        row.L = p.kappa_L;
        const bool blocked = row.k * row.k <= row.d;
        if (!blocked) {
            const auto peaks =
                locate_emission_peaks(p, p.kappa_L - 0.45 * comb,
                                      p.kappa_L + 0.45 * comb, 0.01);
            if (!peaks.empty()) row.L = peaks.front().kappa_L;
        }
        p.kappa_L = row.L;
        SweepSpec spec;
        spec.base = p;
        detail::eval_point(spec, p, row.data);
    });

    std::size_t errors = 0;
    for (const Row& row : rows) {
        out << detail::format_value(row.k) << ',' << detail::format_value(row.d)
            << ',' << detail::format_value(row.L) << ','
            << detail::format_value(row.data.r_a) << ','
            << detail::format_value(row.data.t_a) << ','
            << detail::format_value(row.data.r_b) << ','
            << detail::format_value(row.data.t_b) << ','
            << detail::format_value(row.data.p_em) << ',' << row.data.error
            << '\n';
        if (!row.data.error.empty()) ++errors;
    }
    return errors;
}

/// Runs a named preset; returns the number of error-flagged rows.
inline std::size_t run_preset(const std::string& name, std::ostream& out) {
    if (name == "peakamp") return run_peak_amplitude_preset(out);
    const Preset preset = make_preset(name);
    std::size_t errors = 0;
    bool first = true;
    for (const SweepSpec& part : preset.parts) {
        if (first) {
            errors += run_sweep(part, out);
            first = false;
        } else {
            // continuation block: spec line only, same columns
            out << "# " << spec_echo(part) << "\n";
            errors += detail::write_csv_rows(sweep_rows(part), out);
        }
    }
    return errors;
}

} // namespace mazer
