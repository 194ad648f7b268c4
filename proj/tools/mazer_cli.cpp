// Command-line front end: parameter sweeps as CSV, engine comparison
// reports, and cold-regime peak tables.
//
// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure
// (errors on more than 0.1% of the grid).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mazer/mazer.hpp"

namespace {

struct CommonFlags {
    std::string n = "0";
    std::string k_over_kappa = "1";
    std::string delta_over_g = "0";
    std::string kappa_l = "0";
    std::vector<std::string> axis;
    std::vector<std::string> min, max;
    std::vector<int> steps;
    std::vector<std::string> engine;
    std::string preset;
    std::string profile = "mesa";
    int slices = 0;
    std::string out = "-";
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool wants_axes) {
    cmd->add_option("--n", f.n, "photon number n (>= 0)");
    cmd->add_option("--k-over-kappa", f.k_over_kappa,
                    "incident momentum k/kappa (pi literals ok, e.g. 0.5pi)");
    cmd->add_option("--delta-over-g", f.delta_over_g, "detuning delta/g");
    cmd->add_option("--kappa-l", f.kappa_l, "interaction length kappa*L");
    if (wants_axes) {
        cmd->add_option("--axis", f.axis,
                        "sweep axis (k_over_kappa|delta_over_g|kappa_L); repeat for 2D")
            ->expected(-1);
        cmd->add_option("--min", f.min, "axis lower bound(s)")->expected(-1);
        cmd->add_option("--max", f.max, "axis upper bound(s)")->expected(-1);
        cmd->add_option("--steps", f.steps, "axis point count(s)")->expected(-1);
        cmd->add_option("--preset", f.preset,
                        "canned sweep: fig3|fig4|fig5|fig6|fig7|peakamp");
    }
    cmd->add_option("--engine", f.engine,
                    "closed_form|oracle|rabi|cold_approx|cold_fit")
        ->expected(-1);
    cmd->add_option("--profile", f.profile,
                    "oracle mode profile: mesa|sech2|sine2|file:<path>");
    cmd->add_option("--slices", f.slices,
                    "oracle slice count (0: 1 for mesa, 256 otherwise)");
    cmd->add_option("--out", f.out, "output path or - for stdout");
}

mazer::ModeProfile parse_profile(const std::string& s) {
    if (s == "mesa") return mazer::ModeProfile::mesa();
    if (s == "sech2") return mazer::ModeProfile::sech2();
    if (s == "sine2") return mazer::ModeProfile::sine2();
    if (s.rfind("file:", 0) == 0)
        return mazer::ModeProfile::from_file(s.substr(5));
    throw std::invalid_argument("unknown profile: " + s);
}

mazer::MazerParams parse_base(const CommonFlags& f) {
    mazer::MazerParams p;
    p.n = std::stoi(f.n);
    p.k_over_kappa = mazer::parse_pi_double(f.k_over_kappa);
    p.delta_over_g = mazer::parse_pi_double(f.delta_over_g);
    p.kappa_L = mazer::parse_pi_double(f.kappa_l);
    p.validate();
    return p;
}

mazer::SweepSpec parse_spec(const CommonFlags& f) {
    mazer::SweepSpec spec;
    spec.base = parse_base(f);
    if (f.axis.empty())
        throw std::invalid_argument("sweep needs --axis (or --preset)");
    if (f.min.size() != f.axis.size() || f.max.size() != f.axis.size() ||
        f.steps.size() != f.axis.size())
        throw std::invalid_argument("--min/--max/--steps must match --axis count");
    for (std::size_t i = 0; i < f.axis.size(); ++i)
        spec.axes.push_back(mazer::AxisValues::linspace(
            mazer::axis_from_string(f.axis[i]), mazer::parse_pi_double(f.min[i]),
            mazer::parse_pi_double(f.max[i]), f.steps[i]));
    if (!f.engine.empty()) spec.engine = mazer::engine_from_string(f.engine.front());
    spec.profile = parse_profile(f.profile);
    spec.slices = f.slices;
    spec.validate();
    return spec;
}

struct OutputStream {
    std::ostream* stream = nullptr;
    std::ofstream file;

    explicit OutputStream(const std::string& path) {
        if (path == "-") {
            stream = &std::cout;
            return;
        }
        file.open(path, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output file: " + path);
        stream = &file;
    }
};

// Applies the documented preset overrides: an explicitly given
// --delta-over-g replaces a preset's detuning curve list, --steps the
// resolution of its primary linspace axis.
void apply_preset_overrides(mazer::Preset& preset, const CLI::App* cmd,
                            const CommonFlags& f) {
    for (auto& part : preset.parts) {
        for (auto& axis : part.axes) {
            if (axis.axis == mazer::Axis::DeltaOverG &&
                cmd->count("--delta-over-g") > 0 && axis.values.size() < 10)
                axis.values = {mazer::parse_pi_double(f.delta_over_g)};
            if (!f.steps.empty() && axis.values.size() >= 10)
                axis = mazer::AxisValues::linspace(axis.axis, axis.values.front(),
                                                   axis.values.back(),
                                                   f.steps.front());
        }
    }
}

int cmd_sweep(const CLI::App* cmd, const CommonFlags& f) {
    OutputStream out(f.out);
    std::size_t errors = 0, rows = 0;
    if (!f.preset.empty()) {
        if (f.preset == "peakamp") {
            errors = mazer::run_peak_amplitude_preset(*out.stream);
            rows = mazer::peakamp_rows;
        } else {
            mazer::Preset preset = mazer::make_preset(f.preset);
            apply_preset_overrides(preset, cmd, f);
            std::size_t total = 0;
            bool first = true;
            for (const auto& part : preset.parts) {
                std::size_t n = part.axes[0].values.size();
                if (part.axes.size() == 2) n *= part.axes[1].values.size();
                total += n;
                if (first) {
                    errors += mazer::run_sweep(part, *out.stream);
                    first = false;
                } else {
                    *out.stream << "# " << mazer::spec_echo(part) << "\n";
                    errors += mazer::detail::write_csv_rows(
                        mazer::sweep_rows(part), *out.stream);
                }
            }
            rows = total;
        }
    } else {
        const mazer::SweepSpec spec = parse_spec(f);
        rows = spec.axes[0].values.size();
        if (spec.axes.size() == 2) rows *= spec.axes[1].values.size();
        errors = mazer::run_sweep(spec, *out.stream);
    }
    out.stream->flush();
    if (rows > 0 && double(errors) > 0.001 * double(rows)) {
        std::cerr << "mazer: numerical failure on " << errors << " of " << rows
                  << " grid points\n";
        return 3;
    }
    return 0;
}

int cmd_compare(const CLI::App*, const CommonFlags& f) {
    if (f.engine.size() < 2)
        throw std::invalid_argument("compare needs --engine at least twice");
    mazer::SweepSpec spec;
    if (!f.preset.empty()) {
        const mazer::Preset preset = mazer::make_preset(f.preset);
        if (preset.parts.empty())
            throw std::invalid_argument("preset not usable with compare: " + f.preset);
        spec = preset.parts.front();
    } else {
        spec = parse_spec(f);
    }
    std::vector<mazer::Engine> engines;
    for (const auto& e : f.engine) engines.push_back(mazer::engine_from_string(e));

    const mazer::CompareReport rep = mazer::compare(engines, spec);

    OutputStream out(f.out);
    *out.stream << "# mazer " << mazer::version << " compare\n";
    *out.stream << "# " << mazer::spec_echo(spec) << "\n";
    *out.stream << "engines:";
    for (const auto& e : f.engine) *out.stream << ' ' << e;
    *out.stream << "\npoints:   " << rep.n_points << "\nflagged:  " << rep.n_errors
                << "\nmax_dev:  " << mazer::detail::format_value(rep.max_dev)
                << " at";
    for (double v : rep.worst_axis_values)
        *out.stream << ' ' << mazer::detail::format_value(v);
    *out.stream << "\nmean_dev: " << mazer::detail::format_value(rep.mean_dev)
                << "\n";
    const std::size_t total = rep.n_points + rep.n_errors;
    if (total > 0 && double(rep.n_errors) > 0.001 * double(total)) return 3;
    return 0;
}

int cmd_peaks(const CLI::App*, const CommonFlags& f, int m_max) {
    const mazer::MazerParams base = parse_base(f);
    const mazer::PeakReport report =
        mazer::peak_report(base.n, base.delta_over_g, base.k_over_kappa, m_max);

    const double comb = report.de_broglie_kappa / 2.0;
    const double lo = std::max(0.02, 0.4 * comb);
    const double hi = (m_max + 0.6) * comb;
    const auto located = mazer::locate_emission_peaks(base, lo, hi);

    OutputStream out(f.out);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "# mazer %s peaks: n=%d k_over_kappa=%g delta_over_g=%g\n",
                  mazer::version, base.n, base.k_over_kappa, base.delta_over_g);
    *out.stream << buf;
    std::snprintf(buf, sizeof buf,
                  "# lambda_dB*kappa=%.6f finesse=%.6f amplitude=%.6f regime=%s\n",
                  report.de_broglie_kappa, report.finesse, report.amplitude,
                  mazer::to_string(mazer::classify_regime(base)));
    *out.stream << buf;
    *out.stream << "m,kappa_L_predicted,kappa_L_located,p_em_located\n";
    for (int m = 1; m <= m_max; ++m) {
        const double pred = report.positions_kappa_L[m - 1];
        const mazer::LocatedPeak* best = nullptr;
        for (const auto& peak : located)
            if (!best || std::abs(peak.kappa_L - pred) < std::abs(best->kappa_L - pred))
                best = &peak;
        if (best && std::abs(best->kappa_L - pred) < 0.5 * comb)
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g\n", m, pred,
                          best->kappa_L, best->value);
        else
            std::snprintf(buf, sizeof buf, "%d,%.12g,,\n", m, pred);
        *out.stream << buf;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonresonant one-photon mazer scattering toolkit"};
    app.set_version_flag("--version", std::string("mazer ") + mazer::version);
    app.require_subcommand(1);

    CommonFlags sweep_flags, compare_flags, peaks_flags;
    int m_max = 5;

    CLI::App* sweep = app.add_subcommand("sweep", "emit a parameter sweep as CSV");
    add_common_flags(sweep, sweep_flags, true);
    CLI::App* cmp = app.add_subcommand("compare", "pointwise engine comparison");
    add_common_flags(cmp, compare_flags, true);
    CLI::App* peaks =
        app.add_subcommand("peaks", "cold-regime resonance table (predicted vs located)");
    add_common_flags(peaks, peaks_flags, false);
    peaks->add_option("--m-max", m_max, "number of resonances to report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(sweep, sweep_flags);
        if (cmp->parsed()) return cmd_compare(cmp, compare_flags);
        if (peaks->parsed()) return cmd_peaks(peaks, peaks_flags, m_max);
    } catch (const std::invalid_argument& e) {
        std::cerr << "mazer: " << e.what() << "\n";
        return 2;
    } catch (const mazer::NoConvergence& e) {
        std::cerr << "mazer: " << e.what() << "\n";
        return 3;
    } catch (const mazer::IllConditioned& e) {
        std::cerr << "mazer: " << e.what() << "\n";
        return 3;
    } catch (const mazer::SingularKernel& e) {
        std::cerr << "mazer: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "mazer: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
