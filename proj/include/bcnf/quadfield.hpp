#pragma once

// Exact arithmetic in Q(sqrt d) on top of arbitrary-precision rationals, and
// exact S-cycles of the normal form with coefficients in that field.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "params.hpp"
#include "word.hpp"

namespace bcnf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class FieldMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// a + b sqrt(d). d = 0 marks a plain rational that adopts the other operand's d.
class Quad {
public:
    Quad() = default;
    Quad(int v) : a_(v) {}  // NOLINT(google-explicit-constructor)
    Quad(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
    Quad(Rational a, Rational b, int d) : a_(std::move(a)), b_(std::move(b)), d_(b_ == 0 ? 0 : d) {
        if (d <= 0 && b_ != 0) throw std::invalid_argument("d must be positive");
    }

    static Quad sqrt_of(int d) { return {Rational(0), Rational(1), d}; }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    int d() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    Quad conjugate() const { return {a_, -b_, d_}; }
    /// a^2 - d b^2
    Rational norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

    Quad operator-() const { return {-a_, -b_, d_}; }

    friend Quad operator+(const Quad& x, const Quad& y) {
        const int d = common_d(x, y);
        return {x.a_ + y.a_, x.b_ + y.b_, d};
    }
    friend Quad operator-(const Quad& x, const Quad& y) {
        const int d = common_d(x, y);
        return {x.a_ - y.a_, x.b_ - y.b_, d};
    }
    friend Quad operator*(const Quad& x, const Quad& y) {
        const int d = common_d(x, y);
        return {x.a_ * y.a_ + Rational(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d};
    }
    friend Quad operator/(const Quad& x, const Quad& y) { return x * y.inverse(); }

    Quad inverse() const {
        const Rational n = norm();
        if (n == 0) throw std::domain_error("division by zero in Q(sqrt d)");
        return {a_ / n, -b_ / n, d_};
    }

    Quad& operator+=(const Quad& y) { return *this = *this + y; }
    Quad& operator-=(const Quad& y) { return *this = *this - y; }
    Quad& operator*=(const Quad& y) { return *this = *this * y; }
    Quad& operator/=(const Quad& y) { return *this = *this / y; }

    friend bool operator==(const Quad& x, const Quad& y) {
        common_d(x, y);
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

    double to_double() const {
        return static_cast<double>(a_) + static_cast<double>(b_) * std::sqrt(static_cast<double>(d_));
    }

    std::string str() const {
        if (b_ == 0) return a_.str();
        return "(" + a_.str() + ")+(" + b_.str() + ")*sqrt(" + std::to_string(d_) + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const Quad& q) { return os << q.str(); }

private:
    static int common_d(const Quad& x, const Quad& y) {
        if (x.d_ == 0) return y.d_;
        if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
        throw FieldMismatch("operands from Q(sqrt " + std::to_string(x.d_) + ") and Q(sqrt " +
                            std::to_string(y.d_) + ")");
    }

    Rational a_{0};
    Rational b_{0};
    int d_ = 0;
};

inline int rational_sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

/// Exact sign of a + b sqrt(d).
inline int quad_sign(const Quad& x) {
    const int sa = rational_sign(x.a());
    const int sb = rational_sign(x.b());
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with d b^2
    const Rational a2 = x.a() * x.a();
    const Rational db2 = Rational(x.d()) * x.b() * x.b();
    if (a2 == db2) return 0;
    return a2 > db2 ? sa : sb;
}

inline bool operator<(const Quad& x, const Quad& y) { return quad_sign(x - y) < 0; }
inline bool operator>(const Quad& x, const Quad& y) { return quad_sign(x - y) > 0; }

inline Quad rational(long long num, long long den = 1) { return Quad(Rational(num, den)); }

using QuadParams = BasicParams<Quad>;

struct ExactCycle {
    Word word;
    std::vector<Vec2<Quad>> points;
    std::vector<Quad> margins;  // s_i x_i
    Quad traceM;
    Quad detM;

    int margin_sign_min() const {
        int s = 1;
        for (const auto& m : margins) s = std::min(s, quad_sign(m));
        return s;
    }
    bool admissible() const { return margin_sign_min() > 0; }
};

class ExactUnitEigenvalue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cramer-rule fixed point of f^S followed by exact iteration around the cycle.
inline ExactCycle exact_cycle(const QuadParams& p, const Word& w) {
    const Vec2<Quad> offset{p.mu, Quad(0)};
    Mat2<Quad> M = Mat2<Quad>::identity();
    Vec2<Quad> t{Quad(0), Quad(0)};
    Quad det(1);
    for (Symbol s : w) {
        const Mat2<Quad> A{p.tau(s), Quad(1), -p.delta(s), Quad(0)};
        M = A * M;
        t = A * t + offset;
        det = det * p.delta(s);
    }
    const Mat2<Quad> I_M = Mat2<Quad>::identity() - M;
    const Quad D = I_M.a * I_M.d - I_M.b * I_M.c;
    if (quad_sign(D) == 0) throw ExactUnitEigenvalue("I - M_S is exactly singular for word " + w.str());

    ExactCycle c;
    c.word = w;
    c.traceM = M.a + M.d;
    c.detM = det;
    Vec2<Quad> z{(t.x * I_M.d - I_M.b * t.y) / D, (I_M.a * t.y - I_M.c * t.x) / D};
    c.points.reserve(w.size());
    c.margins.reserve(w.size());
    for (Symbol s : w) {
        c.points.push_back(z);
        c.margins.push_back(s == Symbol::R ? z.x : -z.x);
        z = Vec2<Quad>{p.tau(s) * z.x + z.y + p.mu, -p.delta(s) * z.x};
    }
    if (!(z == c.points.front())) throw std::logic_error("exact cycle failed to close");
    return c;
}

inline Params to_double(const QuadParams& p) {
    return {p.tauL.to_double(), p.deltaL.to_double(), p.tauR.to_double(), p.deltaR.to_double(), p.mu.to_double()};
}

}  // namespace bcnf
