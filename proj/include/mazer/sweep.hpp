#pragma once

// Parameter sweeps over the emission engines with deterministic CSV output.
//
// CSV contract: comma separators, LF line endings, '#'-prefixed metadata
// header (tool version plus the full sweep spec), 12 significant digits,
// columns: axis value(s), r_a, t_a, r_b, t_b, p_em, error. Rows hitting a
// numerical error are emitted with the error column set, never dropped.
// Output is byte-identical across runs for the same spec: fixed iteration
// order, fixed formatting, and a work pool that only parallelizes the
// evaluation, not the assembly.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "mazer/core.hpp"
#include "mazer/mesa.hpp"
#include "mazer/regimes.hpp"
#include "mazer/solver.hpp"

namespace mazer {

inline constexpr const char* version = "1.0.0";

enum class Engine { ClosedForm, Oracle, Rabi, ColdApprox, ColdFit };

inline const char* to_string(Engine e) {
    switch (e) {
        case Engine::ClosedForm: return "closed_form";
        case Engine::Oracle: return "oracle";
        case Engine::Rabi: return "rabi";
        case Engine::ColdApprox: return "cold_approx";
        case Engine::ColdFit: return "cold_fit";
    }
    return "?";
}

inline Engine engine_from_string(const std::string& s) {
    if (s == "closed_form") return Engine::ClosedForm;
    if (s == "oracle") return Engine::Oracle;
    if (s == "rabi") return Engine::Rabi;
    if (s == "cold_approx") return Engine::ColdApprox;
    if (s == "cold_fit") return Engine::ColdFit;
    throw std::invalid_argument("unknown engine: " + s);
}

enum class Axis { KOverKappa, DeltaOverG, KappaL };

inline const char* to_string(Axis a) {
    switch (a) {
        case Axis::KOverKappa: return "k_over_kappa";
        case Axis::DeltaOverG: return "delta_over_g";
        case Axis::KappaL: return "kappa_L";
    }
    return "?";
}

inline Axis axis_from_string(const std::string& s) {
    if (s == "k_over_kappa") return Axis::KOverKappa;
    if (s == "delta_over_g") return Axis::DeltaOverG;
    if (s == "kappa_L") return Axis::KappaL;
    throw std::invalid_argument("unknown axis: " + s);
}

/// One sweep axis: the parameter it drives and the ordered grid values.
struct AxisValues {
    Axis axis;
    std::vector<double> values;

    static AxisValues linspace(Axis axis, double min, double max, int steps) {
        if (steps < 2) throw std::invalid_argument("axis needs steps >= 2");
        if (!(min < max)) throw std::invalid_argument("axis needs min < max");
        AxisValues a{axis, {}};
        a.values.reserve(steps);
        for (int i = 0; i < steps; ++i)
            a.values.push_back(min + (max - min) * i / double(steps - 1));
        return a;
    }
    static AxisValues list(Axis axis, std::vector<double> values) {
        if (values.empty()) throw std::invalid_argument("axis needs values");
        return {axis, std::move(values)};
    }
};

/// A sweep: one or two axes (outer first), the fixed remaining parameters,
/// and the engine that evaluates each grid point.
struct SweepSpec {
    std::vector<AxisValues> axes;
    MazerParams base;
    Engine engine = Engine::ClosedForm;
    ModeProfile profile = ModeProfile::mesa();  // Oracle engine only
    int slices = 0;                             // 0: 1 for mesa, 256 otherwise

    void validate() const {
        if (axes.empty() || axes.size() > 2)
            throw std::invalid_argument("sweep needs 1 or 2 axes");
        if (axes.size() == 2 && axes[0].axis == axes[1].axis)
            throw std::invalid_argument("sweep axes must differ");
        if (slices < 0) throw std::invalid_argument("slices must be >= 0");
    }
    int default_slices() const {
        return profile.kind == ProfileKind::Mesa ? 1 : 256;
    }
};

struct SweepRow {
    std::vector<double> axis_values;
    double r_a = nan_value(), t_a = nan_value();
    double r_b = nan_value(), t_b = nan_value();
    double p_em = nan_value();
    std::string error;  // empty, "singular", "ill_conditioned", "no_convergence"

    static double nan_value() { return std::nan(""); }
};

namespace detail {

inline void apply_axis(MazerParams& p, Axis a, double v) {
    switch (a) {
        case Axis::KOverKappa: p.k_over_kappa = v; break;
        case Axis::DeltaOverG: p.delta_over_g = v; break;
        case Axis::KappaL: p.kappa_L = v; break;
    }
}

inline void eval_point(const SweepSpec& spec, const MazerParams& p, SweepRow& row) {
    try {
        switch (spec.engine) {
            case Engine::ClosedForm: {
                const ChannelProbabilities probs =
                    probabilities(mesa_amplitudes(p), channel_wavenumbers(p));
                row.r_a = probs.r_a;
                row.t_a = probs.t_a;
                row.r_b = probs.r_b;
                row.t_b = probs.t_b;
                row.p_em = probs.r_b + probs.t_b;
                break;
            }
            case Engine::Oracle: {
                const int n = spec.slices > 0 ? spec.slices : spec.default_slices();
                const ScatteringAmplitudes amps =
                    solve_scattering(spec.profile, p, n);
                const ChannelProbabilities probs =
                    probabilities(amps, channel_wavenumbers(p));
                row.r_a = probs.r_a;
                row.t_a = probs.t_a;
                row.r_b = probs.r_b;
                row.t_b = probs.t_b;
                row.p_em = probs.r_b + probs.t_b;
                break;
            }
            case Engine::Rabi:
                row.p_em = rabi_emission(p);
                break;
            case Engine::ColdApprox:
                row.p_em = cold_emission_approx(p).value;
                break;
            case Engine::ColdFit:
                row.p_em = cold_emission_fit(p);
                break;
        }
    } catch (const SingularKernel&) {
        row.error = "singular";
    } catch (const IllConditioned&) {
        row.error = "ill_conditioned";
    } catch (const NoConvergence&) {
        row.error = "no_convergence";
    }
}

/// Index-deterministic parallel loop; worker count is capped and exceptions
/// are rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers =
        std::min<std::size_t>(count / 64 + 1, std::max(1u, std::min(hw, 8u)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::size_t write_csv_rows(const std::vector<SweepRow>& rows,
                                  std::ostream& out) {
    std::size_t errors = 0;
    std::string line;
    for (const auto& row : rows) {
        line.clear();
        for (double v : row.axis_values) {
            line += format_value(v);
            line += ',';
        }
        line += format_value(row.r_a);
        line += ',';
        line += format_value(row.t_a);
        line += ',';
        line += format_value(row.r_b);
        line += ',';
        line += format_value(row.t_b);
        line += ',';
        line += format_value(row.p_em);
        line += ',';
        line += row.error;
        line += '\n';
        out << line;
        if (!row.error.empty()) ++errors;
    }
    return errors;
}

} // namespace detail

/// Evaluates the full grid (outer axis first, then inner) concurrently and
/// returns the rows in deterministic order.
inline std::vector<SweepRow> sweep_rows(const SweepSpec& spec) {
    spec.validate();  // per-point parameter validation happens in the engines
    const std::size_t n0 = spec.axes[0].values.size();
    const std::size_t n1 = spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;
    std::vector<SweepRow> rows(n0 * n1);
    detail::parallel_for(rows.size(), [&](std::size_t idx) {
        const std::size_t i = idx / n1;
        const std::size_t j = idx % n1;
        SweepRow& row = rows[idx];
        MazerParams p = spec.base;
        row.axis_values.push_back(spec.axes[0].values[i]);
        detail::apply_axis(p, spec.axes[0].axis, spec.axes[0].values[i]);
        if (spec.axes.size() == 2) {
            row.axis_values.push_back(spec.axes[1].values[j]);
            detail::apply_axis(p, spec.axes[1].axis, spec.axes[1].values[j]);
        }
        detail::eval_point(spec, p, row);
    });
    return rows;
}

inline std::string spec_echo(const SweepSpec& spec) {
    std::string s;
    s += "engine=";
    s += to_string(spec.engine);
    s += " n=" + std::to_string(spec.base.n);
    s += " k_over_kappa=" + detail::format_value(spec.base.k_over_kappa);
    s += " delta_over_g=" + detail::format_value(spec.base.delta_over_g);
    s += " kappa_L=" + detail::format_value(spec.base.kappa_L);
    for (const auto& a : spec.axes) {
        s += std::string(" axis=") + to_string(a.axis) + "[" +
             std::to_string(a.values.size()) + ":" +
             detail::format_value(a.values.front()) + ".." +
             detail::format_value(a.values.back()) + "]";
    }
    if (spec.engine == Engine::Oracle) {
        s += std::string(" profile=") + spec.profile.name();
        s += " slices=" +
             std::to_string(spec.slices > 0 ? spec.slices : spec.default_slices());
    }
    return s;
}

/// Streams the sweep as CSV; returns the number of error-flagged rows.
inline std::size_t run_sweep(const SweepSpec& spec, std::ostream& out) {
    const std::vector<SweepRow> rows = sweep_rows(spec);
    out << "# mazer " << version << "\n";
    out << "# " << spec_echo(spec) << "\n";
    for (const auto& a : spec.axes) out << to_string(a.axis) << ",";
    out << "r_a,t_a,r_b,t_b,p_em,error\n";
    return detail::write_csv_rows(rows, out);
}

/// Pointwise deviation summary between engines evaluated on one grid.
/// The four channel probabilities are compared whenever both engines
/// produce them; p_em always is.
struct CompareReport {
    std::size_t n_points = 0;
    std::size_t n_errors = 0;  // points skipped because an engine flagged them
    double max_dev = 0.0;
    double mean_dev = 0.0;
    std::vector<double> worst_axis_values;
};

inline CompareReport compare(const std::vector<Engine>& engines, SweepSpec spec) {
    if (engines.size() < 2)
        throw std::invalid_argument("compare needs at least two engines");
    std::vector<std::vector<SweepRow>> all;
    all.reserve(engines.size());
    for (Engine e : engines) {
        spec.engine = e;
        all.push_back(sweep_rows(spec));
    }
    CompareReport rep;
    double dev_sum = 0.0;
    const std::size_t n = all[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        bool flagged = false;
        for (const auto& rows : all) flagged = flagged || !rows[i].error.empty();
        if (flagged) {
            ++rep.n_errors;
            continue;
        }
        double dev = 0.0;
        for (std::size_t e = 1; e < all.size(); ++e) {
            const SweepRow& a = all[0][i];
            const SweepRow& b = all[e][i];
            dev = std::max(dev, std::abs(a.p_em - b.p_em));
            if (!std::isnan(a.r_a) && !std::isnan(b.r_a)) {
                dev = std::max(dev, std::abs(a.r_a - b.r_a));
                dev = std::max(dev, std::abs(a.t_a - b.t_a));
                dev = std::max(dev, std::abs(a.r_b - b.r_b));
                dev = std::max(dev, std::abs(a.t_b - b.t_b));
            }
        }
        ++rep.n_points;
        dev_sum += dev;
        if (dev >= rep.max_dev) {
            rep.max_dev = dev;
            rep.worst_axis_values = all[0][i].axis_values;
        }
    }
    if (rep.n_points > 0) rep.mean_dev = dev_sum / double(rep.n_points);
    return rep;
}

/// Parses a numeric literal with an optional "pi" suffix: "0.25", "pi",
/// "10pi", "-0.5pi".
inline double parse_pi_double(const std::string& text) {
    std::string s = text;
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = pi;
        s.erase(s.size() - 2);
        if (s.empty() || s == "+") s = "1";
        if (s == "-") s = "-1";
    }
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != s.size())
        throw std::invalid_argument("not a number: '" + text + "'");
    return v * factor;
}

} // namespace mazer
