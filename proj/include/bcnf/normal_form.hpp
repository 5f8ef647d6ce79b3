#pragma once

// The two-dimensional border-collision normal form, composition of its
// half-maps along symbolic words, and solution/classification of periodic
// orbits ("S-cycles").

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "params.hpp"
#include "word.hpp"

namespace bcnf {

/// Companion form [[tau, 1], [-delta, 0]].
template <typename T>
Mat2<T> half_matrix(const BasicParams<T>& p, Symbol s) {
    return {p.tau(s), T(1), -p.delta(s), T(0)};
}

template <typename T>
AffineMap2<T> half_map(const BasicParams<T>& p, Symbol s) {
    return {half_matrix(p, s), {p.mu, T(0)}};
}

/// f^S = f^{S_{n-1}} o ... o f^{S_0}; the matrix part is A_{S_{n-1}} ... A_{S_0},
/// so the first-applied symbol is the rightmost factor.
template <typename T>
AffineMap2<T> compose_word(const BasicParams<T>& p, const Word& w) {
    AffineMap2<T> f{Mat2<T>::identity(), {T(0), T(0)}};
    for (Symbol s : w) {
        const Mat2<T> A = half_matrix(p, s);
        f.matrix = A * f.matrix;
        f.translation = A * f.translation + Vec2<T>{p.mu, T(0)};
    }
    return f;
}

/// Product of the determinants: delta_L^{#L} delta_R^{#R}.
template <typename T>
T word_det(const BasicParams<T>& p, const Word& w) {
    T out(1);
    for (Symbol s : w) out = out * p.delta(s);
    return out;
}

/// The piecewise-linear map itself (x <= 0 uses the left half-map).
inline Vec2<double> normal_form_map(const Params& p, const Vec2<double>& z) {
    return half_map(p, z.x <= 0.0 ? Symbol::L : Symbol::R)(z);
}

// ----------------------------------------------------------------------------
// Stability

enum class Stability { Attracting, StableNonAttracting, Unstable, UnitEigenvalue };

/// Which of det-tr+1 >= 0, det+tr+1 >= 0, det <= 1 is binding.
enum class StabilityCondition { SaddleNode = 0, PeriodDoubling = 1, NeimarkSacker = 2 };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Attracting: return "Attracting";
        case Stability::StableNonAttracting: return "StableNonAttracting";
        case Stability::Unstable: return "Unstable";
        case Stability::UnitEigenvalue: return "UnitEigenvalue";
    }
    return "?";
}

inline const char* to_string(StabilityCondition c) {
    switch (c) {
        case StabilityCondition::SaddleNode: return "SaddleNode";
        case StabilityCondition::PeriodDoubling: return "PeriodDoubling";
        case StabilityCondition::NeimarkSacker: return "NeimarkSacker";
    }
    return "?";
}

struct StabilityMargins {
    double saddleNode;      // det - tr + 1
    double periodDoubling;  // det + tr + 1
    double neimarkSacker;   // 1 - det

    double min() const { return std::min({saddleNode, periodDoubling, neimarkSacker}); }
    StabilityCondition binding() const {
        if (saddleNode <= periodDoubling && saddleNode <= neimarkSacker) return StabilityCondition::SaddleNode;
        if (periodDoubling <= neimarkSacker) return StabilityCondition::PeriodDoubling;
        return StabilityCondition::NeimarkSacker;
    }
};

inline StabilityMargins stability_margins(double det, double trace) {
    return {det - trace + 1.0, det + trace + 1.0, 1.0 - det};
}

/// Classification from (det, trace). tol = 0 gives the strict textbook test.
inline Stability classify_stability(double det, double trace, double tol = 0.0) {
    const StabilityMargins m = stability_margins(det, trace);
    if (std::abs(m.saddleNode) <= tol) return Stability::UnitEigenvalue;
    if (m.saddleNode > tol && m.periodDoubling > tol && m.neimarkSacker > tol) return Stability::Attracting;
    if (m.saddleNode >= -tol && m.periodDoubling >= -tol && m.neimarkSacker >= -tol)
        return Stability::StableNonAttracting;
    return Stability::Unstable;
}

inline Stability classify_stability(const Mat2<double>& M, double tol = 0.0) {
    return classify_stability(M.det(), M.trace(), tol);
}

// ----------------------------------------------------------------------------
// Cycles

class UnitEigenvalueError : public std::runtime_error {
public:
    explicit UnitEigenvalueError(const std::string& what, double detIminusM = 0.0)
        : std::runtime_error(what), detIminusM_(detIminusM) {}
    double det_i_minus_m() const { return detIminusM_; }

private:
    double detIminusM_;
};

enum class Admissibility { Virtual, OnManifold, Admissible };

inline const char* to_string(Admissibility a) {
    switch (a) {
        case Admissibility::Virtual: return "Virtual";
        case Admissibility::OnManifold: return "OnManifold";
        case Admissibility::Admissible: return "Admissible";
    }
    return "?";
}

namespace tolerance {
/// |det(I - M)| below this fraction of (1 + |tr M| + |det M|) counts as a unit eigenvalue.
inline constexpr double kSingular = 1e-10;
/// |x_i| below this fraction of (1 + max_j |p_j|) counts as lying on x = 0.
inline constexpr double kOnManifold = 1e-9;
}  // namespace tolerance

struct Cycle {
    Word word;
    std::vector<Vec2<double>> points;
    std::vector<double> margins;  // s_i * x_i, s_i = +1 for R and -1 for L
    double detM = 0.0;
    double traceM = 0.0;
    double detIminusM = 0.0;
    double closureResidual = 0.0;
    Stability stability = Stability::Unstable;
    Multipliers multipliers;

    std::size_t size() const { return points.size(); }

    double scale() const {
        double s = 0.0;
        for (const auto& p : points) s = std::max(s, norm(p));
        return s;
    }
    double on_manifold_tolerance() const { return tolerance::kOnManifold * (1.0 + scale()); }
};

/// Signed admissibility margin: min_i s_i x_i.
inline double margin(const Cycle& c) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : c.margins) m = std::min(m, v);
    return m;
}

inline std::size_t margin_index(const Cycle& c) {
    return static_cast<std::size_t>(std::min_element(c.margins.begin(), c.margins.end()) - c.margins.begin());
}

inline Admissibility classify_admissibility(const Cycle& c) {
    const double m = margin(c);
    const double tol = c.on_manifold_tolerance();
    if (std::abs(m) <= tol) return Admissibility::OnManifold;
    return m > 0.0 ? Admissibility::Admissible : Admissibility::Virtual;
}

inline bool is_admissible(const Cycle& c) { return margin(c) >= 0.0; }

namespace detail {

// One row of the cyclic system with nonzeros confined to three block columns:
// the pivot column j, column j+1 and the last column n-1.
struct CyclicRow {
    double cj[2];
    double cnext[2];
    double clast[2];
    double rhs;
};

inline void givens(CyclicRow& p, CyclicRow& q, int col) {
    const double a = p.cj[col];
    const double b = q.cj[col];
    if (b == 0.0) return;
    const double r = std::hypot(a, b);
    const double c = a / r;
    const double s = b / r;
    auto rot = [c, s](double& x, double& y) {
        const double nx = c * x + s * y;
        const double ny = -s * x + c * y;
        x = nx;
        y = ny;
    };
    for (int k = 0; k < 2; ++k) {
        rot(p.cj[k], q.cj[k]);
        rot(p.cnext[k], q.cnext[k]);
        rot(p.clast[k], q.clast[k]);
    }
    rot(p.rhs, q.rhs);
}

inline Vec2<double> solve2(double a, double b, double c, double d, double r0, double r1) {
    const double dt = a * d - b * c;
    if (dt == 0.0 || !std::isfinite(dt)) throw UnitEigenvalueError("singular periodic-orbit system", 0.0);
    return {(r0 * d - b * r1) / dt, (a * r1 - c * r0) / dt};
}

}  // namespace detail

/// All points of the periodic orbit following w, from the cyclic system
/// p_{i+1} - A_{w_i} p_i = (mu, 0) (indices mod n), by Givens elimination.
/// Orthogonal elimination avoids the exponential cancellation that a direct
/// solve with the composed matrix suffers for saddle-type words.
inline std::vector<Vec2<double>> solve_periodic_points(const Params& p, const Word& w) {
    const std::size_t n = w.size();
    const double mu = p.mu;
    if (n == 1) {
        const Mat2<double> A = half_matrix(p, w[0]);
        return {detail::solve2(1.0 - A.a, -A.b, -A.c, 1.0 - A.d, mu, 0.0)};
    }

    struct PivotRows {
        detail::CyclicRow r[2];
    };
    std::vector<PivotRows> pivots(n - 1);

    // Carry rows start as the wrap-around equation p_0 - A_{n-1} p_{n-1} = c.
    const Mat2<double> Alast = half_matrix(p, w[n - 1]);
    detail::CyclicRow carry[2] = {
        {{1.0, 0.0}, {0.0, 0.0}, {-Alast.a, -Alast.b}, mu},
        {{0.0, 1.0}, {0.0, 0.0}, {-Alast.c, -Alast.d}, 0.0},
    };

    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Mat2<double> A = half_matrix(p, w[j]);
        // equation j: -A_j p_j + p_{j+1} = c
        detail::CyclicRow eq[2] = {
            {{-A.a, -A.b}, {1.0, 0.0}, {0.0, 0.0}, mu},
            {{-A.c, -A.d}, {0.0, 1.0}, {0.0, 0.0}, 0.0},
        };
        detail::CyclicRow* rows[4] = {&carry[0], &carry[1], &eq[0], &eq[1]};
        for (int k = 1; k < 4; ++k) detail::givens(*rows[0], *rows[k], 0);
        for (int k = 2; k < 4; ++k) detail::givens(*rows[1], *rows[k], 1);

        pivots[j].r[0] = *rows[0];
        pivots[j].r[1] = *rows[1];
        // the remaining two rows no longer involve column j; shift them over
        detail::CyclicRow next[2];
        for (int k = 0; k < 2; ++k) {
            const detail::CyclicRow& src = *rows[2 + k];
            next[k] = {{src.cnext[0], src.cnext[1]}, {0.0, 0.0}, {src.clast[0], src.clast[1]}, src.rhs};
        }
        carry[0] = next[0];
        carry[1] = next[1];
    }

    // carry now acts on column n-1 through both its "current" and "last" slots
    std::vector<Vec2<double>> pts(n);
    pts[n - 1] = detail::solve2(carry[0].cj[0] + carry[0].clast[0], carry[0].cj[1] + carry[0].clast[1],
                                carry[1].cj[0] + carry[1].clast[0], carry[1].cj[1] + carry[1].clast[1],
                                carry[0].rhs, carry[1].rhs);
    const Vec2<double>& last = pts[n - 1];
    for (std::size_t jj = n - 1; jj-- > 0;) {
        const Vec2<double>& nxt = pts[jj + 1];
        const bool nextIsLast = (jj + 1 == n - 1);
        double r[2];
        for (int k = 0; k < 2; ++k) {
            const detail::CyclicRow& row = pivots[jj].r[k];
            r[k] = row.rhs - row.cnext[0] * nxt.x - row.cnext[1] * nxt.y;
            if (!nextIsLast) r[k] -= row.clast[0] * last.x + row.clast[1] * last.y;
            else r[k] -= row.clast[0] * nxt.x + row.clast[1] * nxt.y;
        }
        const detail::CyclicRow& r0 = pivots[jj].r[0];
        const detail::CyclicRow& r1 = pivots[jj].r[1];
        // upper triangular after the Givens sweep (r1.cj[0] == 0)
        if (r1.cj[1] == 0.0 || r0.cj[0] == 0.0) throw UnitEigenvalueError("singular periodic-orbit system", 0.0);
        const double y = r[1] / r1.cj[1];
        const double x = (r[0] - r0.cj[1] * y) / r0.cj[0];
        pts[jj] = {x, y};
    }
    return pts;
}

inline bool near_unit_eigenvalue(double detIminusM, double traceM, double detM, double rel = tolerance::kSingular) {
    return !(std::abs(detIminusM) > rel * (1.0 + std::abs(traceM) + std::abs(detM)));
}

/// Solve and classify the S-cycle for word w. Throws UnitEigenvalueError when
/// I - M_S is (numerically) singular, i.e. the cycle is not unique or absent.
/// `stabilityTol` is the equality tolerance used by classify_stability.
inline Cycle solve_cycle(const Params& p, const Word& w, double stabilityTol = 0.0,
                         double singularTol = tolerance::kSingular) {
    const AffineMap2<double> f = compose_word(p, w);
    Cycle c;
    c.word = w;
    c.detM = word_det(p, w);
    c.traceM = f.matrix.trace();
    c.detIminusM = 1.0 - c.traceM + c.detM;
    if (near_unit_eigenvalue(c.detIminusM, c.traceM, c.detM, singularTol))
        throw UnitEigenvalueError("M_S has a unit eigenvalue for word " + w.str(), c.detIminusM);

    c.points = solve_periodic_points(p, w);
    const std::size_t n = w.size();
    c.margins.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.margins[i] = (w[i] == Symbol::R ? 1.0 : -1.0) * c.points[i].x;
        const Vec2<double> img = half_map(p, w[i])(c.points[i]);
        const Vec2<double> diff = img - c.points[(i + 1) % n];
        c.closureResidual = std::max(c.closureResidual, norm(diff) / (1.0 + norm(img)));
    }
    c.stability = classify_stability(c.detM, c.traceM, stabilityTol);
    c.multipliers = multipliers_from(c.traceM, c.detM);
    return c;
}

/// Fixed point of f^S via the composed 2x2 system (adequate for short words).
inline Vec2<double> composed_fixed_point(const Params& p, const Word& w) {
    return solve_fixed_point(compose_word(p, w));
}

}  // namespace bcnf
