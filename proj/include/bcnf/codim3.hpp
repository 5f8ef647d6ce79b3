#pragma once

// Saddle-cycle eigenbasis frame for the coincident-homoclinic (codimension-3)
// scenario: g^X is diagonal, g^Y is a general affine map in (u, v) coordinates
// centred on the X-cycle.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "dual.hpp"
#include "linalg.hpp"
#include "normal_form.hpp"
#include "params.hpp"
#include "report.hpp"
#include "word.hpp"

namespace bcnf {

class FrameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename T = double>
struct EigenBasis {
    T lambda1{};  // |lambda1| <= |lambda2|
    T lambda2{};
    Vec2<T> zeta1{};
    Vec2<T> zeta2{};
    Mat2<T> Q{};  // [zeta1 zeta2]
    Vec2<T> fixedPoint{};
};

template <typename T = double>
struct Codim3Coeffs {
    T gamma11{}, gamma12{}, gamma21{}, gamma22{};
    T sigma1{}, sigma2{};
};

namespace detail {

inline double abs_value(double x) { return std::abs(x); }
template <typename T>
double abs_value(const Dual<T>& x) { return std::abs(x.val); }

/// Eigenvector of M for eigenvalue lam, scaled so that its larger-magnitude
/// component equals 1. Branch choices are made on value parts so that a dual
/// evaluation follows the same smooth branch.
template <typename T>
Vec2<T> unit_eigenvector(const Mat2<T>& M, const T& lam) {
    const Vec2<T> v1{M.b, lam - M.a};
    const Vec2<T> v2{lam - M.d, M.c};
    const double n1 = std::max(abs_value(v1.x), abs_value(v1.y));
    const double n2 = std::max(abs_value(v2.x), abs_value(v2.y));
    const Vec2<T>& v = n1 >= n2 ? v1 : v2;
    if (std::max(n1, n2) == 0.0) throw FrameError("degenerate eigenvector");
    if (abs_value(v.x) >= abs_value(v.y)) return {T(1), v.y / v.x};
    return {v.x / v.y, T(1)};
}

}  // namespace detail

inline constexpr double kFrameTol = 1e-9;

/// Real distinct eigenvalues of M_X (none equal to 1), eigenvectors and the X-cycle point.
template <typename T>
EigenBasis<T> eigen_basis(const BasicParams<T>& p, const Word& X, double tol = kFrameTol) {
    const AffineMap2<T> fX = compose_word(p, X);
    const Mat2<T>& M = fX.matrix;
    const T half = M.trace() / T(2);
    const T disc = half * half - M.det();
    using detail::abs_value;
    const double scale = 1.0 + abs_value(half) * abs_value(half);
    if (value_of(disc) <= tol * scale) throw FrameError("M_X has complex or repeated eigenvalues");
    using std::sqrt;
    const T s = sqrt(disc);
    T lp = half + s;
    T lm = half - s;
    EigenBasis<T> eb;
    if (abs_value(lm) <= abs_value(lp)) {
        eb.lambda1 = lm;
        eb.lambda2 = lp;
    } else {
        eb.lambda1 = lp;
        eb.lambda2 = lm;
    }
    if (std::abs(value_of(eb.lambda1) - 1.0) <= tol || std::abs(value_of(eb.lambda2) - 1.0) <= tol)
        throw FrameError("M_X has a unit eigenvalue; use the repeated-unit-eigenvalue frame");
    eb.zeta1 = detail::unit_eigenvector(M, eb.lambda1);
    eb.zeta2 = detail::unit_eigenvector(M, eb.lambda2);
    eb.Q = Mat2<T>::from_columns(eb.zeta1, eb.zeta2);
    eb.fixedPoint = solve_fixed_point(fX);
    return eb;
}

template <typename T>
Codim3Coeffs<T> conjugate_gY(const BasicParams<T>& p, const EigenBasis<T>& eb, const Word& Y) {
    const AffineMap2<T> g = conjugate(compose_word(p, Y), eb.Q, eb.fixedPoint);
    return {g.matrix.a, g.matrix.b, g.matrix.c, g.matrix.d, g.translation.x, g.translation.y};
}

template <typename T>
Codim3Coeffs<T> conjugate_gY(const BasicParams<T>& p, const Word& X, const Word& Y, double tol = kFrameTol) {
    return conjugate_gY(p, eigen_basis(p, X, tol), Y);
}

/// Matrix part of g^{X^k Y} built from the frame coefficients.
inline Mat2<double> gSk_matrix(const Codim3Coeffs<double>& g, double lambda1, double lambda2, int k) {
    const double l1k = std::pow(lambda1, k);
    const double l2k = std::pow(lambda2, k);
    return {g.gamma11 * l1k, g.gamma12 * l2k, g.gamma21 * l1k, g.gamma22 * l2k};
}

struct Codim3Derivatives {
    double gamma22Prime = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double lambda1Prime = 0.0, lambda2Prime = 0.0;
    /// lambda1' lambda2 + lambda1 lambda2' = d/de det(M_X)
    double detPrime() const { return lambda1Prime * lambda2 + lambda1 * lambda2Prime; }
};

/// First derivatives at eps = 0 along the family by dual-number propagation.
inline Codim3Derivatives codim3_derivatives(const Family& fam, const Word& X, const Word& Y) {
    using D = Dual<double>;
    const BasicParams<D> p = family_params<D>(fam, D::variable(0.0));
    const EigenBasis<D> eb = eigen_basis(p, X);
    const Codim3Coeffs<D> g = conjugate_gY(p, eb, Y);
    return {g.gamma22.eps, eb.lambda1.val, eb.lambda2.val, eb.lambda1.eps, eb.lambda2.eps};
}

inline double gamma22_prime(const Family& fam, const Word& X, const Word& Y) {
    return codim3_derivatives(fam, X, Y).gamma22Prime;
}

struct Codim3Report {
    double lambda1 = NAN, lambda2 = NAN;
    double lambdaProduct = NAN;
    double gamma11 = NAN, gamma12 = NAN, gamma21 = NAN, gamma22 = NAN;
    double sigma1 = NAN, sigma2 = NAN;
    bool zeta2Vertical = false;
    std::optional<double> gamma22Prime;
    bool nsDegenerate = false;  // gamma12 gamma21 == -1
    std::optional<double> detPrime;
    int kFirst = 0, kLast = 0;  // S[k] range examined at eps = 0
    double minMarginTail = NAN;
    double tol = 0.0;
    ConditionList conditions;

    bool pass() const { return conditions.all_pass(); }
};

struct Codim3CheckOptions {
    std::optional<Direction> direction;  // enables the derivative conditions
    int kCap = 20;                       // S[k] cycles probed for k = 1..kCap
    double marginFloor = 1e-4;           // homoclinic-limit diagnostic
};

/// Evaluate the codimension-3 conditions at (p, X, Y). Frame
/// failures are recorded as failed conditions rather than thrown.
inline Codim3Report check_codim3(const Params& p, const Word& X, const Word& Y, double tol,
                                 const Codim3CheckOptions& opt = {}) {
    Codim3Report r;
    r.tol = tol;
    auto& c = r.conditions;
    c.add_flag("X_primitive", is_primitive(X));
    c.add_flag("X0_ne_Y0", X.front() != Y.front());

    EigenBasis<double> eb;
    try {
        eb = eigen_basis(p, X, tol);
    } catch (const std::exception&) {
        c.add_flag("frame_valid", false);
        return r;
    }
    c.add_flag("frame_valid", true);
    const Codim3Coeffs<double> g = conjugate_gY(p, eb, Y);
    r.lambda1 = eb.lambda1;
    r.lambda2 = eb.lambda2;
    r.lambdaProduct = eb.lambda1 * eb.lambda2;
    r.gamma11 = g.gamma11;
    r.gamma12 = g.gamma12;
    r.gamma21 = g.gamma21;
    r.gamma22 = g.gamma22;
    r.sigma1 = g.sigma1;
    r.sigma2 = g.sigma2;

    c.add("lambda1_in_[0,1)", eb.lambda1, 1.0, eb.lambda1 >= -tol && eb.lambda1 < 1.0);
    c.add("lambda2_gt_1", eb.lambda2, 1.0, eb.lambda2 > 1.0);
    c.add_zero("lambda1_lambda2_minus_1", r.lambdaProduct - 1.0, tol);
    c.add_nonzero("lambda1_nonzero", eb.lambda1, tol);
    c.add_zero("gamma22", g.gamma22, tol);
    c.add_zero("sigma2", g.sigma2, tol);
    c.add_nonzero("gamma21", g.gamma21, tol);
    c.add_nonzero("sigma1", g.sigma1, tol);
    const double zx = std::abs(eb.zeta2.x) / norm(eb.zeta2);
    r.zeta2Vertical = zx <= tol;
    c.add("zeta2_not_vertical", zx, tol, !r.zeta2Vertical);

    const double ns = g.gamma12 * g.gamma21 + 1.0;
    r.nsDegenerate = std::abs(ns) <= tol;
    c.add("gamma12_gamma21_plus_1", ns, tol, true);  // informational

    if (opt.direction) {
        const Family fam{p, *opt.direction, X, Y, Scenario::Codim3};
        try {
            const Codim3Derivatives d = codim3_derivatives(fam, X, Y);
            r.gamma22Prime = d.gamma22Prime;
            r.detPrime = d.detPrime();
            c.add_nonzero("gamma22_prime", d.gamma22Prime, tol);
            if (r.nsDegenerate) c.add("det_prime_negative", d.detPrime(), 0.0, d.detPrime() < 0.0);
        } catch (const std::exception&) {
            c.add_flag("derivatives_valid", false);
        }
    }

    // Finite stand-in for "infinitely many admissible stable S[k]-cycles":
    // every k in [kFirst, kCap] must pass, with kFirst in the first half.
    int kFirst = 0;
    double minMargin = INFINITY;
    for (int k = opt.kCap; k >= 1; --k) {
        bool ok = false;
        try {
            const Cycle cyc = solve_cycle(p, family_word(X, k, Y), tol);
            const bool stable =
                cyc.stability == Stability::Attracting || cyc.stability == Stability::StableNonAttracting;
            ok = stable && classify_admissibility(cyc) == Admissibility::Admissible;
            if (ok) minMargin = std::min(minMargin, margin(cyc));
        } catch (const UnitEigenvalueError&) {
        }
        if (!ok) break;
        kFirst = k;
    }
    r.kFirst = kFirst;
    r.kLast = opt.kCap;
    r.minMarginTail = minMargin;
    c.add("Sk_admissible_stable_from_k", kFirst, opt.kCap / 2, kFirst >= 1 && kFirst <= opt.kCap / 2);
    c.add("Sk_min_margin", minMargin, opt.marginFloor, kFirst >= 1 && minMargin > opt.marginFloor);
    return r;
}

}  // namespace bcnf
