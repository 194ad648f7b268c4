#pragma once

// Coupled-channel scattering solver in the bare basis for an arbitrary mode
// profile u(z) on [0, L].
//
// Inserting the stationary ansatz with total energy (k/kappa)^2 into the
// coupled equations at theta = 0 gives phi'' = -K(z) phi with the real
// symmetric coupling matrix (kappa units)
//
//     K = [ k^2          -sqrt(n+1) u ]
//         [ -sqrt(n+1) u  k_b^2       ]
//
// acting on (phi_a, phi_b). The profile is sliced into piecewise-constant
// segments, each propagated exactly through the eigendecomposition of its K.
// There is no basis in which the equations decouple over the whole axis once
// a detuning is present, so the composition is done channel-wise.
//
// Scattering amplitudes are extracted by composing per-interface scattering
// matrices (Redheffer star products) over per-slice mode amplitudes
// referenced to the slice edges. All propagation factors then satisfy
// |exp(i q dz)| <= 1, which keeps deep-tunneling cavities (cosh(|k+|L) far
// beyond 1/epsilon) as accurate as the shallow ones; an end-to-end product
// of the 4x4 transfer matrices loses exp(|Im k+| L) digits to cancellation
// at the boundary solve and is kept only as the exposed per-slice object.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mazer/core.hpp"
#include "mazer/detail/small_linalg.hpp"
#include "mazer/errors.hpp"
#include "mazer/mesa.hpp"

namespace mazer {

enum class ProfileKind { Mesa, Sech2, Sine2, Sampled };

/// Cavity mode function u(z) >= 0 on [0, L], zero outside. The shape is
/// parameterized by the fraction z/L; Sampled profiles are piecewise
/// constant between their breakpoints.
struct ModeProfile {
    ProfileKind kind = ProfileKind::Mesa;
    // Optional explicit length. Zero means "use MazerParams::kappa_L"; a
    // positive value must match it (checked in solve_scattering).
    double length_kappa_L = 0.0;
    // (z_fraction, u) breakpoints for Sampled, sorted by z_fraction; u holds
    // from each breakpoint up to the next one.
    std::vector<std::pair<double, double>> samples;

    static ModeProfile mesa() { return {ProfileKind::Mesa, 0.0, {}}; }
    static ModeProfile sech2() { return {ProfileKind::Sech2, 0.0, {}}; }
    static ModeProfile sine2() { return {ProfileKind::Sine2, 0.0, {}}; }
    static ModeProfile sampled(std::vector<std::pair<double, double>> pts);
    static ModeProfile from_file(const std::string& path);

    /// u at fraction f = z/L in [0, 1].
    double value(double f) const {
        switch (kind) {
            case ProfileKind::Mesa:
                return 1.0;
            case ProfileKind::Sech2: {
                const double x = std::cosh(6.0 * (f - 0.5));
                return 1.0 / (x * x);
            }
            case ProfileKind::Sine2: {
                const double s = std::sin(pi * f);
                return s * s;
            }
            case ProfileKind::Sampled: {
                double u = samples.front().second;
                for (const auto& [z, v] : samples) {
                    if (z > f) break;
                    u = v;
                }
                return u;
            }
        }
        return 0.0;
    }

    const char* name() const {
        switch (kind) {
            case ProfileKind::Mesa: return "mesa";
            case ProfileKind::Sech2: return "sech2";
            case ProfileKind::Sine2: return "sine2";
            case ProfileKind::Sampled: return "sampled";
        }
        return "?";
    }
};

inline ModeProfile ModeProfile::sampled(std::vector<std::pair<double, double>> pts) {
    if (pts.empty())
        throw std::invalid_argument("sampled profile needs at least one point");
    std::sort(pts.begin(), pts.end());
    for (const auto& [z, u] : pts)
        if (z < 0.0 || z > 1.0 || u < 0.0)
            throw std::invalid_argument(
                "sampled profile needs z_fraction in [0,1] and u >= 0");
    return {ProfileKind::Sampled, 0.0, std::move(pts)};
}

/// Two whitespace-separated columns per line (z_fraction in [0,1], u >= 0);
/// '#' starts a comment.
inline ModeProfile ModeProfile::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open profile file: " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double z, u;
        if (!(ss >> z)) continue;  // blank or comment-only line
        if (!(ss >> u))
            throw std::invalid_argument("profile file " + path + ": line " +
                                        std::to_string(lineno) +
                                        ": expected two columns");
        double extra;
        if (ss >> extra)
            throw std::invalid_argument("profile file " + path + ": line " +
                                        std::to_string(lineno) +
                                        ": expected two columns");
        pts.emplace_back(z, u);
    }
    if (pts.empty())
        throw std::invalid_argument("profile file " + path + ": no samples");
    return sampled(std::move(pts));
}

/// Stationary coupling matrix K (kappa units) at local mode amplitude u,
/// with phi'' = -K phi.
struct CouplingMatrix {
    double aa;  // k^2
    double ab;  // -sqrt(n+1) u
    double bb;  // k_b^2 = k^2 - delta/g
};

inline CouplingMatrix stationary_coupling_matrix(double u, const MazerParams& p) {
    p.validate();
    if (u < 0.0) throw std::invalid_argument("mode amplitude u must be >= 0");
    const double k2 = p.k_over_kappa * p.k_over_kappa;
    return {k2, -std::sqrt(double(p.n + 1)) * u, k2 - p.delta_over_g};
}

/// Exact propagator of the state vector (phi_a, phi_a', phi_b, phi_b')
/// across one constant-u slice. Unit determinant (Wronskian preservation).
struct SliceTransfer {
    detail::Mat4 m{};

    complex det() const { return detail::det4(m); }
    std::array<complex, 4> apply(const std::array<complex, 4>& v) const {
        return detail::mat4_apply(m, v);
    }
    SliceTransfer operator*(const SliceTransfer& rhs) const {
        return {detail::mat4_mul(m, rhs.m)};
    }
};

namespace detail {

// cos(q dz), sin(q dz)/q and -q sin(q dz) from lambda = q^2 (real), with a
// series fallback so the q -> 0 sinc limit stays smooth.
struct ModePropagator {
    complex c, s_over_q, minus_q_s;
};

inline ModePropagator mode_propagator(double lambda, double dz) {
    const double x2 = lambda * dz * dz;  // (q dz)^2, sign carries evanescence
    ModePropagator pr;
    if (std::abs(x2) < 1e-10) {
        pr.c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
        pr.s_over_q = dz * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
        pr.minus_q_s = -lambda * dz * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
        return pr;
    }
    const complex q = sqrt_branch(lambda);
    const complex qd = q * dz;
    pr.c = std::cos(qd);
    pr.s_over_q = std::sin(qd) / q;
    pr.minus_q_s = -q * std::sin(qd);
    return pr;
}

} // namespace detail

inline SliceTransfer slice_transfer(double u, double dz, const MazerParams& p) {
    if (!(dz > 0.0)) throw std::invalid_argument("slice_transfer: dz must be > 0");
    const CouplingMatrix K = stationary_coupling_matrix(u, p);
    const detail::SymEigen2 e = detail::sym_eigen2(K.aa, K.ab, K.bb);
    const detail::ModePropagator p1 = detail::mode_propagator(e.lambda1, dz);
    const detail::ModePropagator p2 = detail::mode_propagator(e.lambda2, dz);

    // (phi) = Q (psi) componentwise for value and derivative; assemble
    // T = M_Q blockdiag(P1, P2) M_Q^T with M_Q the 2x2-blocked rotation.
    const double q[2][2] = {{e.c, -e.s}, {e.s, e.c}};
    const complex P[2][2][2] = {
        {{p1.c, p1.s_over_q}, {p1.minus_q_s, p1.c}},
        {{p2.c, p2.s_over_q}, {p2.minus_q_s, p2.c}},
    };
    SliceTransfer t;
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
            complex blk[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
            for (int j = 0; j < 2; ++j)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        blk[x][y] += q[r][j] * q[s][j] * P[j][x][y];
            t.m[4 * (2 * r + 0) + (2 * s + 0)] = blk[0][0];
            t.m[4 * (2 * r + 0) + (2 * s + 1)] = blk[0][1];
            t.m[4 * (2 * r + 1) + (2 * s + 0)] = blk[1][0];
            t.m[4 * (2 * r + 1) + (2 * s + 1)] = blk[1][1];
        }
    return t;
}

namespace detail {

// One region's mode basis: K = Q diag(lambda) Q^T with wavenumbers q_j on
// the decaying branch.
struct RegionModes {
    double qc, qs;  // rotation columns (cos, sin)
    complex q1, q2;
};

inline RegionModes region_modes(double u, const MazerParams& p) {
    const CouplingMatrix K = stationary_coupling_matrix(u, p);
    const SymEigen2 e = sym_eigen2(K.aa, K.ab, K.bb);
    return {e.c, e.s, sqrt_branch(e.lambda1), sqrt_branch(e.lambda2)};
}

// Scattering blocks between forward/backward mode amplitudes:
//   [out_fwd_right; out_bwd_left] = [[tf, rb], [rf, tb]] [in_fwd; in_bwd]
struct Smat {
    Mat2 tf, rf, rb, tb;
};

inline Smat star(const Smat& A, const Smat& B) {
    const Mat2 I = Mat2::identity();
    const Mat2 X = inverse(I - A.rb * B.rf, "interface resonance inversion");
    const Mat2 Y = inverse(I - B.rf * A.rb, "interface resonance inversion");
    Smat s;
    s.tf = B.tf * X * A.tf;
    s.rf = A.rf + A.tb * (B.rf * (X * A.tf));
    s.rb = B.rb + B.tf * (A.rb * (Y * B.tb));
    s.tb = A.tb * Y * B.tb;
    return s;
}

// Interface between region r (left) and region s (right): continuity of phi
// and phi' in the channel basis, solved for outgoing mode amplitudes.
inline Smat interface_smat(const RegionModes& r, const RegionModes& s) {
    const complex i{0.0, 1.0};
    const complex Qr[2][2] = {{r.qc, -r.qs}, {r.qs, r.qc}};
    const complex Qs[2][2] = {{s.qc, -s.qs}, {s.qs, s.qc}};
    const complex Dr[2] = {i * r.q1, i * r.q2};
    const complex Ds[2] = {i * s.q1, i * s.q2};

    Mat4 m_out{}, m_in{};
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 2; ++col) {
            // unknowns [a (region s fwd); b (region r bwd)]
            m_out[4 * row + col] = Qs[row][col];
            m_out[4 * row + (col + 2)] = -Qr[row][col];
            m_out[4 * (row + 2) + col] = Qs[row][col] * Ds[col];
            m_out[4 * (row + 2) + (col + 2)] = Qr[row][col] * Dr[col];
            // inputs [alpha (region r fwd); beta (region s bwd)]
            m_in[4 * row + col] = Qr[row][col];
            m_in[4 * row + (col + 2)] = -Qs[row][col];
            m_in[4 * (row + 2) + col] = Qr[row][col] * Dr[col];
            m_in[4 * (row + 2) + (col + 2)] = Qs[row][col] * Ds[col];
        }

    const Lu4 lu = lu_factor4(m_out);
    if (lu.singular || cond_inf4(m_out, lu) > 1e12)
        throw IllConditioned("interface matching system");

    Mat4 sm{};
    for (int col = 0; col < 4; ++col) {
        Vec4 rhs{};
        for (int row = 0; row < 4; ++row) rhs[row] = m_in[4 * row + col];
        const Vec4 x = lu_solve4(lu, rhs);
        for (int row = 0; row < 4; ++row) sm[4 * row + col] = x[row];
    }
    Smat out;
    out.tf = {sm[0], sm[1], sm[4], sm[5]};
    out.rb = {sm[2], sm[3], sm[6], sm[7]};
    out.rf = {sm[8], sm[9], sm[12], sm[13]};
    out.tb = {sm[10], sm[11], sm[14], sm[15]};
    return out;
}

inline Smat propagation_smat(const RegionModes& r, double dz) {
    const complex i{0.0, 1.0};
    Smat s;
    s.tf = Mat2::diag(std::exp(i * r.q1 * dz), std::exp(i * r.q2 * dz));
    s.tb = s.tf;
    s.rf = Mat2{};
    s.rb = Mat2{};
    return s;
}

} // namespace detail

/// Scattering amplitudes for an arbitrary profile, discretized into
/// n_slices piecewise-constant segments sampled at slice midpoints.
/// Exact for Mesa with any slice count. The incident state is a unit
/// excited-atom wave from the left; outgoing waves (decaying, where
/// evanescent) are imposed on both sides.
inline ScatteringAmplitudes solve_scattering(const ModeProfile& profile,
                                             const MazerParams& p, int n_slices) {
    p.validate();
    if (n_slices < 1) throw std::invalid_argument("solve_scattering: n_slices >= 1");
    if (profile.length_kappa_L > 0.0 && profile.length_kappa_L != p.kappa_L)
        throw std::invalid_argument(
            "profile length disagrees with MazerParams::kappa_L");
    const double L = p.kappa_L;
    if (L == 0.0) return {0.0, 1.0, 0.0, 0.0};

    const detail::RegionModes outside = detail::region_modes(0.0, p);
    const double dz = L / n_slices;

    detail::RegionModes prev = outside;
    detail::Smat total;
    bool have_total = false;
    for (int i = 0; i < n_slices; ++i) {
        const double u = profile.value((i + 0.5) / n_slices);
        const detail::RegionModes cur = detail::region_modes(u, p);
        const detail::Smat step =
            detail::star(detail::interface_smat(prev, cur),
                         detail::propagation_smat(cur, dz));
        total = have_total ? detail::star(total, step) : step;
        have_total = true;
        prev = cur;
    }
    total = detail::star(total, detail::interface_smat(prev, outside));

    // Outside, the mode basis is the channel basis (a first), so the first
    // columns of tf/rf are the response to the unit incident a wave.
    const auto t = total.tf.col0();
    const auto r = total.rf.col0();
    return {r[0], t[0], r[1], t[1]};
}

/// Result of the slice-refinement loop.
struct ConvergedResult {
    ScatteringAmplitudes amps;
    int n_slices;
};

/// Doubles the slice count from 16 until successive amplitude vectors agree
/// to tol in max norm; throws NoConvergence past 2^14 slices.
inline ConvergedResult converge(const ModeProfile& profile, const MazerParams& p,
                                double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("converge: tol must be > 0");
    constexpr int cap = 1 << 14;
    int n = 16;
    ScatteringAmplitudes prev = solve_scattering(profile, p, n);
    while (n < cap) {
        n *= 2;
        const ScatteringAmplitudes cur = solve_scattering(profile, p, n);
        const double dev = std::max(
            std::max(std::abs(cur.rho_a - prev.rho_a), std::abs(cur.tau_a - prev.tau_a)),
            std::max(std::abs(cur.rho_b - prev.rho_b), std::abs(cur.tau_b - prev.tau_b)));
        if (dev < tol) return {cur, n};
        prev = cur;
    }
    throw NoConvergence("slice refinement did not reach tol by 2^14 slices");
}

} // namespace mazer
