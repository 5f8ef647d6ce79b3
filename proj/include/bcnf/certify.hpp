#pragma once

// Certification of the admissibility thresholds at the three codimension-four
// example points: exact in Q(sqrt 2) and Q(sqrt 5) for A and K, floating point
// with explicit slack for B (whose field is quartic).

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "normal_form.hpp"
#include "presets.hpp"
#include "quadfield.hpp"

namespace bcnf {

struct CertificateFailure {
    int k = 0;
    int index = -1;  // cycle point index, -1 when not point specific
    std::string what;
};

struct Certificate {
    std::string example;
    int kMax = 0;
    int expectedThreshold = 0;
    int threshold = 0;  // smallest k with admissible and stable for all k..kMax; 0 if none
    std::string multipliers;
    bool multipliersOk = false;
    bool closedFormChecks = false;
    bool floatAgreement = false;
    double floatMaxError = 0.0;
    std::vector<CertificateFailure> failures;

    bool pass() const {
        return failures.empty() && threshold == expectedThreshold && multipliersOk && closedFormChecks &&
               floatAgreement;
    }
};

namespace closed_forms {

using QVec = Vec2<Quad>;

/// Points of the S[k]-cycle at paramA in the frame u = x, v = y - sqrt(2) x.
inline std::vector<QVec> paramA_points(int k) {
    const Quad r2 = Quad::sqrt_of(2);
    const Quad K(k);
    auto q = [](long long n, long long d = 1) { return rational(n, d); };
    std::vector<QVec> w(3 * k + 4);
    for (int jj = 0; jj <= k; ++jj) {
        const Quad j(jj);
        const Quad jk = j * (K - j);
        w[3 * jj] = {q(1, 2) * (q(-4) + q(3) * r2) * jk - (q(-1) + r2) * j + r2 / q(4) * K +
                         q(3, 4) * (q(2) - r2),
                     (q(2) - r2) * j - q(1, 2) * (q(2) - r2) * K - r2 / q(2)};
        if (jj == k) break;
        w[3 * jj + 1] = {q(1, 2) * (q(-4) + q(3) * r2) * jk + (q(3) - q(2) * r2) * j +
                             q(1, 4) * (q(-4) + q(3) * r2) * K + q(5, 4) * (q(2) - r2),
                         -q(1, 2) * (q(2) - r2) * jk + (q(3) - q(2) * r2) * j - q(3, 4) * (q(2) - r2) * K +
                             q(1, 4) * (q(4) - q(7) * r2)};
        w[3 * jj + 2] = {-(q(3) - q(2) * r2) * jk + q(2) * (q(3) - q(2) * r2) * j - q(1, 2) * (q(5) - q(3) * r2) * K +
                             q(3, 2) * (q(3) - q(2) * r2),
                         q(1, 2) * (q(-4) + q(3) * r2) * jk - (q(-5) + q(4) * r2) * j +
                             q(1, 4) * (q(-8) + q(7) * r2) * K - q(1, 4) * (q(-14) + q(13) * r2)};
    }
    const QVec w3k{-q(1, 4) * (q(-4) + q(3) * r2) * K + q(3, 4) * (q(2) - r2), q(1, 2) * (q(2) - r2) * K - r2 / q(2)};
    if (!(w3k == w[3 * k])) throw std::logic_error("closed forms for w_3k disagree");
    w[3 * k + 1] = {q(1, 2) * (q(2) - r2) * K + q(1, 2) * (q(2) - r2), -r2 / q(4) * K - q(1, 4) * (q(2) + r2)};
    w[3 * k + 2] = {-q(1, 4) * (q(-4) + q(3) * r2) * K + q(3, 4) * (q(2) - r2),
                    -q(1, 2) * (q(-1) + r2) * K - q(1, 2) * (q(-1) + q(2) * r2)};
    w[3 * k + 3] = {-q(1, 2) * (q(-1) + r2) * K + q(1, 2) * (q(3) - q(2) * r2),
                    r2 / q(4) * K - q(1, 4) * (q(-2) + q(3) * r2)};
    return w;
}

/// Points of the S[k]-cycle at paramK in the frame u = x, v = y + x.
inline std::vector<QVec> paramK_points(int k) {
    const Quad r5 = Quad::sqrt_of(5);
    const Quad K(k);
    auto q = [](long long n, long long d = 1) { return rational(n, d); };
    const Quad c = q(1, 2) * (q(3) + r5);
    std::vector<QVec> w(k + 5);
    for (int jj = 0; jj <= k; ++jj) {
        const Quad j(jj);
        w[jj] = {-q(1, 2) * j * (K - j) + q(1, 2) * j - q(1, 4) * K + c, j - q(1, 2) * K};
    }
    w[k + 1] = {q(1, 8) * (q(3) + r5) * K + c, q(1, 8) * (q(1) + r5) * K};
    w[k + 2] = {q(1, 4) * (q(1) + r5) * K + c, q(1, 8) * (q(-1) + r5) * K};
    w[k + 3] = {q(1, 8) * (q(3) + r5) * K + c, -q(1, 8) * (q(-1) + r5) * K};
    w[k + 4] = {q(1, 4) * K + c, -q(1, 8) * (q(1) + r5) * K};
    return w;
}

}  // namespace closed_forms

/// Exact stability test from the three inequalities (non-strict).
inline bool exact_stable(const ExactCycle& c) {
    return quad_sign(c.detM - c.traceM + Quad(1)) >= 0 && quad_sign(c.detM + c.traceM + Quad(1)) >= 0 &&
           quad_sign(Quad(1) - c.detM) >= 0;
}

namespace detail {

inline int threshold_from(const std::vector<bool>& ok) {
    // ok[k] for k = 1..kMax; smallest k0 with ok on [k0, kMax] and !ok below
    const int kMax = static_cast<int>(ok.size()) - 1;
    int k0 = kMax + 1;
    while (k0 - 1 >= 1 && ok[k0 - 1]) --k0;
    if (k0 > kMax) return 0;
    for (int k = 1; k < k0; ++k)
        if (ok[k]) return -k;  // admissible below the tail: not a clean threshold
    return k0;
}

}  // namespace detail

enum class Example { A, B, K };

inline std::string to_string(Example e) {
    switch (e) {
        case Example::A: return "A";
        case Example::B: return "B";
        case Example::K: return "K";
    }
    return "?";
}

/// Exact certificate for A (nu = sqrt 2, threshold 8) or K (nu = -1, threshold 11).
/// floatKMax bounds the exact-vs-floating comparison.
inline Certificate verify_exact(Example e, int kMax, int floatKMax = 50) {
    if (e == Example::B) throw std::invalid_argument("B is certified in floating point");
    const bool isA = e == Example::A;
    const QuadParams p = isA ? presets::paramA_exact() : presets::paramK_exact();
    const Params pd = to_double(p);
    const Word X = isA ? "RRL"_w : "L"_w;
    const Word Y = isA ? "LRLL"_w : "RRRRR"_w;
    const Quad nu = isA ? Quad::sqrt_of(2) : Quad(-1);

    Certificate cert;
    cert.example = to_string(e);
    cert.kMax = kMax;
    cert.expectedThreshold = isA ? 8 : 11;
    cert.multipliers = "(-1,-1)";
    cert.multipliersOk = true;
    cert.closedFormChecks = true;
    cert.floatAgreement = true;

    std::vector<bool> ok(kMax + 1, false);
    for (int k = 1; k <= kMax; ++k) {
        const Word w = family_word(X, k, Y);
        ExactCycle c;
        try {
            c = exact_cycle(p, w);
        } catch (const ExactUnitEigenvalue&) {
            cert.failures.push_back({k, -1, "I - M_S singular"});
            continue;
        }
        const bool stable = exact_stable(c);
        ok[k] = c.admissible() && stable;
        if (!(c.traceM == Quad(-2) && c.detM == Quad(1))) {
            cert.multipliersOk = false;
            cert.failures.push_back({k, -1, "multipliers differ from (-1,-1): trace " + c.traceM.str()});
        }

        const auto forms = isA ? closed_forms::paramA_points(k) : closed_forms::paramK_points(k);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Vec2<Quad> uv{c.points[i].x, c.points[i].y - nu * c.points[i].x};
            if (!(uv == forms[i])) {
                cert.closedFormChecks = false;
                cert.failures.push_back({k, static_cast<int>(i), "closed form mismatch"});
            }
        }

        if (k <= floatKMax) {
            const Cycle fc = solve_cycle(pd, w);
            for (std::size_t i = 0; i < w.size(); ++i) {
                const Vec2<double> ex{c.points[i].x.to_double(), c.points[i].y.to_double()};
                const double err = norm(fc.points[i] - ex) / (1.0 + norm(ex));
                cert.floatMaxError = std::max(cert.floatMaxError, err);
                if (err > 1e-10) {
                    cert.floatAgreement = false;
                    cert.failures.push_back({k, static_cast<int>(i), "floating point disagrees with exact"});
                }
                const int es = quad_sign(c.margins[i]);
                if (std::abs(fc.margins[i]) > 1e-8 && es != (fc.margins[i] > 0 ? 1 : -1)) {
                    cert.floatAgreement = false;
                    cert.failures.push_back({k, static_cast<int>(i), "margin sign disagrees with exact"});
                }
            }
        }
    }
    cert.threshold = detail::threshold_from(ok);
    if (cert.threshold != cert.expectedThreshold)
        cert.failures.push_back({cert.threshold, -1, "threshold differs from " + std::to_string(cert.expectedThreshold)});
    return cert;
}

/// Floating-point certificate for B: margin > slack for k >= 4 and < -slack for k < 4,
/// multipliers within slack of (-1,-1).
inline Certificate verify_float_B(int kMax, double slack = 1e-6) {
    const Params p = presets::paramB();
    const Word X = "RRRL"_w, Y = "LRRLL"_w;
    Certificate cert;
    cert.example = "B";
    cert.kMax = kMax;
    cert.expectedThreshold = 4;
    cert.multipliers = "(-1,-1)";
    cert.multipliersOk = true;
    cert.closedFormChecks = true;  // no closed forms in this field
    cert.floatAgreement = true;
    std::vector<bool> ok(kMax + 1, false);
    for (int k = 1; k <= kMax; ++k) {
        Cycle c;
        try {
            c = solve_cycle(p, family_word(X, k, Y));
        } catch (const UnitEigenvalueError&) {
            cert.failures.push_back({k, -1, "I - M_S singular"});
            continue;
        }
        if (std::abs(c.traceM + 2.0) > slack || std::abs(c.detM - 1.0) > slack) {
            cert.multipliersOk = false;
            cert.failures.push_back({k, -1, "multipliers differ from (-1,-1)"});
        }
        const double m = margin(c);
        const bool stable = classify_stability(c.detM, c.traceM, slack) != Stability::Unstable;
        if (m > slack && stable) {
            ok[k] = true;
        } else if (!(m < -slack)) {
            cert.failures.push_back({k, static_cast<int>(margin_index(c)), "margin within slack of zero"});
        }
    }
    cert.threshold = detail::threshold_from(ok);
    if (cert.threshold != cert.expectedThreshold)
        cert.failures.push_back({cert.threshold, -1, "threshold differs from 4"});
    return cert;
}

inline Certificate verify_example(Example e, int kMax) {
    return e == Example::B ? verify_float_B(kMax) : verify_exact(e, kMax);
}

}  // namespace bcnf
