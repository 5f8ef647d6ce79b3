#pragma once

// Fixed-size 2x2 linear algebra over an arbitrary field-like scalar.
// The scalar is a template parameter so the same composition code runs on
// double, on dual numbers (derivatives) and on exact quadratic surds.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace bcnf {

template <typename T>
struct Vec2 {
    T x{};
    T y{};

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(const T& s, const Vec2& a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
};

/// Row-major 2x2 matrix [[a, b], [c, d]].
template <typename T>
struct Mat2 {
    T a{}, b{}, c{}, d{};

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
    static Mat2 zero() { return {T(0), T(0), T(0), T(0)}; }
    static Mat2 from_columns(const Vec2<T>& c0, const Vec2<T>& c1) { return {c0.x, c1.x, c0.y, c1.y}; }

    T det() const { return a * d - b * c; }
    T trace() const { return a + d; }

    Mat2 inverse() const {
        const T dt = det();
        if (dt == T(0)) throw std::domain_error("singular 2x2 matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend Vec2<T> operator*(const Mat2& m, const Vec2<T>& v) {
        return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
    }
    friend Mat2 operator+(const Mat2& m, const Mat2& n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }
    friend Mat2 operator-(const Mat2& m, const Mat2& n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }
    friend bool operator==(const Mat2& m, const Mat2& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }
};

/// w -> matrix * w + translation
template <typename T>
struct AffineMap2 {
    Mat2<T> matrix = Mat2<T>::identity();
    Vec2<T> translation{T(0), T(0)};

    Vec2<T> operator()(const Vec2<T>& w) const { return matrix * w + translation; }

    /// (*this) after `first`, i.e. x -> this(first(x)).
    AffineMap2 after(const AffineMap2& first) const {
        return {matrix * first.matrix, matrix * first.translation + translation};
    }
};

/// Conjugate an affine map by w = Q^{-1}(x - origin).
template <typename T>
AffineMap2<T> conjugate(const AffineMap2<T>& f, const Mat2<T>& Q, const Vec2<T>& origin) {
    const Mat2<T> Qi = Q.inverse();
    return {Qi * f.matrix * Q, Qi * (f(origin) - origin)};
}

template <typename T>
AffineMap2<T> conjugate(const AffineMap2<T>& f, const Mat2<T>& Q) {
    return conjugate(f, Q, Vec2<T>{T(0), T(0)});
}

inline double max_abs(const Mat2<double>& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)), std::max(std::abs(m.c), std::abs(m.d)));
}

inline double norm(const Vec2<double>& v) { return std::hypot(v.x, v.y); }

/// Solve (I - M) p = t by Cramer's rule; throws on exact singularity.
template <typename T>
Vec2<T> solve_fixed_point(const AffineMap2<T>& f) {
    const Mat2<T> A = Mat2<T>::identity() - f.matrix;
    const T dt = A.det();
    if (dt == T(0)) throw std::domain_error("I - M is singular");
    const Vec2<T>& t = f.translation;
    return {(t.x * A.d - A.b * t.y) / dt, (A.a * t.y - A.c * t.x) / dt};
}

/// Eigenvalue pair of a real 2x2 matrix from its trace and determinant.
struct Multipliers {
    bool complex = false;
    // real pair (first, second) with |first| <= |second|, or re +- i*im
    double first = 0.0;
    double second = 0.0;

    double re() const { return first; }
    double im() const { return second; }
    std::array<std::complex<double>, 2> values() const {
        if (complex) return {std::complex<double>(first, second), std::complex<double>(first, -second)};
        return {std::complex<double>(first, 0.0), std::complex<double>(second, 0.0)};
    }
};

inline Multipliers multipliers_from(double trace, double det) {
    const double half = 0.5 * trace;
    const double disc = half * half - det;
    Multipliers m;
    if (disc < 0.0) {
        m.complex = true;
        m.first = half;
        m.second = std::sqrt(-disc);
        return m;
    }
    // avoid cancellation: larger root first, smaller from the product
    const double s = std::sqrt(disc);
    const double big = half >= 0.0 ? half + s : half - s;
    const double small = big != 0.0 ? det / big : 0.0;
    m.first = small;
    m.second = big;
    if (std::abs(m.first) > std::abs(m.second)) std::swap(m.first, m.second);
    return m;
}

inline Multipliers multipliers(const Mat2<double>& m) { return multipliers_from(m.trace(), m.det()); }

}  // namespace bcnf
