#pragma once

// Fixed-size complex linear algebra used by the coupled-channel solver.
// Everything here is 2x2 or 4x4, so closed forms and plain Gaussian
// elimination with partial pivoting are both adequate and fast.

#include <array>
#include <cmath>
#include <complex>

#include "mazer/errors.hpp"

namespace mazer::detail {

using complex = std::complex<double>;

struct Mat2 {
    // row-major: [a b; c d]
    complex a{0.0}, b{0.0}, c{0.0}, d{0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(complex x, complex y) { return {x, 0.0, 0.0, y}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    std::array<complex, 2> col0() const { return {a, c}; }
};

inline complex det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

/// Inverse of a 2x2 complex matrix; throws IllConditioned near singularity.
inline Mat2 inverse(const Mat2& m, const char* what) {
    const complex dd = det(m);
    const double scale = std::abs(m.a) * std::abs(m.d) + std::abs(m.b) * std::abs(m.c);
    if (std::abs(dd) < 1e-14 * (scale > 0.0 ? scale : 1.0))
        throw IllConditioned(what);
    const complex inv = 1.0 / dd;
    return {m.d * inv, -m.b * inv, -m.c * inv, m.a * inv};
}

/// Eigendecomposition of a real symmetric 2x2 matrix [[aa, ab], [ab, bb]].
/// Columns of the rotation [[c, -s], [s, c]] are the eigenvectors of
/// (lambda1, lambda2); the rotation is exactly orthogonal by construction.
struct SymEigen2 {
    double c, s;
    double lambda1, lambda2;
};

inline SymEigen2 sym_eigen2(double aa, double ab, double bb) {
    SymEigen2 e;
    if (ab == 0.0) {
        e.c = 1.0;
        e.s = 0.0;
        e.lambda1 = aa;
        e.lambda2 = bb;
        return e;
    }
    const double phi = 0.5 * std::atan2(2.0 * ab, aa - bb);
    e.c = std::cos(phi);
    e.s = std::sin(phi);
    e.lambda1 = aa * e.c * e.c + 2.0 * ab * e.c * e.s + bb * e.s * e.s;
    e.lambda2 = aa * e.s * e.s - 2.0 * ab * e.c * e.s + bb * e.c * e.c;
    return e;
}

using Mat4 = std::array<complex, 16>;  // row-major
using Vec4 = std::array<complex, 4>;

inline Mat4 mat4_identity() {
    Mat4 m{};
    m[0] = m[5] = m[10] = m[15] = 1.0;
    return m;
}

inline Mat4 mat4_mul(const Mat4& x, const Mat4& y) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            complex s = 0.0;
            for (int l = 0; l < 4; ++l) s += x[4 * i + l] * y[4 * l + j];
            r[4 * i + j] = s;
        }
    return r;
}

inline Vec4 mat4_apply(const Mat4& m, const Vec4& v) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i) {
        complex s = 0.0;
        for (int j = 0; j < 4; ++j) s += m[4 * i + j] * v[j];
        r[i] = s;
    }
    return r;
}

/// LU factorization with partial pivoting, kept for repeated solves.
struct Lu4 {
    Mat4 lu{};
    std::array<int, 4> piv{};
    bool singular = false;
};

inline Lu4 lu_factor4(Mat4 m) {
    Lu4 f;
    for (int i = 0; i < 4; ++i) f.piv[i] = i;
    for (int col = 0; col < 4; ++col) {
        int best = col;
        double best_mag = std::abs(m[4 * col + col]);
        for (int r = col + 1; r < 4; ++r) {
            const double mag = std::abs(m[4 * r + col]);
            if (mag > best_mag) {
                best = r;
                best_mag = mag;
            }
        }
        if (best_mag == 0.0) {
            f.singular = true;
            f.lu = m;
            return f;
        }
        if (best != col) {
            for (int j = 0; j < 4; ++j) std::swap(m[4 * best + j], m[4 * col + j]);
            std::swap(f.piv[best], f.piv[col]);
        }
        const complex pivot = m[4 * col + col];
        for (int r = col + 1; r < 4; ++r) {
            const complex factor = m[4 * r + col] / pivot;
            m[4 * r + col] = factor;
            for (int j = col + 1; j < 4; ++j) m[4 * r + j] -= factor * m[4 * col + j];
        }
    }
    f.lu = m;
    return f;
}

inline Vec4 lu_solve4(const Lu4& f, const Vec4& rhs) {
    Vec4 x{};
    for (int i = 0; i < 4; ++i) x[i] = rhs[f.piv[i]];
    for (int i = 1; i < 4; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu[4 * i + j] * x[j];
    for (int i = 3; i >= 0; --i) {
        for (int j = i + 1; j < 4; ++j) x[i] -= f.lu[4 * i + j] * x[j];
        x[i] /= f.lu[4 * i + i];
    }
    return x;
}

inline double norm_inf4(const Mat4& m) {
    double best = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += std::abs(m[4 * i + j]);
        best = std::max(best, row);
    }
    return best;
}

/// Infinity-norm condition estimate via the explicit (tiny) inverse.
inline double cond_inf4(const Mat4& m, const Lu4& f) {
    Mat4 inv{};
    for (int col = 0; col < 4; ++col) {
        Vec4 e{};
        e[col] = 1.0;
        const Vec4 x = lu_solve4(f, e);
        for (int r = 0; r < 4; ++r) inv[4 * r + col] = x[r];
    }
    return norm_inf4(m) * norm_inf4(inv);
}

inline complex det4(const Mat4& m) {
    const Lu4 f = lu_factor4(m);
    if (f.singular) return 0.0;
    complex d = 1.0;
    for (int i = 0; i < 4; ++i) d *= f.lu[4 * i + i];
    // sign of the pivot permutation
    std::array<int, 4> p = f.piv;
    int swaps = 0;
    for (int i = 0; i < 4; ++i)
        while (p[i] != i) {
            std::swap(p[i], p[p[i]]);
            ++swaps;
        }
    return (swaps % 2 == 0) ? d : -d;
}

} // namespace mazer::detail
