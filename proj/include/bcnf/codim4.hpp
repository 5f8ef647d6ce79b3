#pragma once

// Triangular frame for a repeated unit eigenvalue of M_X, the associated
// condition report, a grid + Newton search for such points, and the
// first-order perturbation coefficients alpha (det) and beta (trace).

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <tuple>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "codim3.hpp"
#include "dual.hpp"
#include "linalg.hpp"
#include "normal_form.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "report.hpp"
#include "word.hpp"

namespace bcnf {

class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// [0,1]^T is an eigenvector of M_X, so u = 0 is invariant.
class VerticalEigenvectorError : public FrameError {
public:
    using FrameError::FrameError;
};

struct Codim4Frame {
    double nu = 0.0;
    Mat2<double> Q;      // [[1, 0], [nu, 1]]
    Mat2<double> Omega;  // Q^{-1} M_X Q
    Vec2<double> rho;    // Q^{-1} t_X
    Mat2<double> Gamma;  // Q^{-1} M_Y Q
    Vec2<double> sigma;  // Q^{-1} t_Y

    double omega12() const { return Omega.b; }
    double rho1() const { return rho.x; }
    double rho2() const { return rho.y; }
    double gamma11() const { return Gamma.a; }
    double gamma12() const { return Gamma.b; }
    double gamma21() const { return Gamma.c; }
    double gamma22() const { return Gamma.d; }
    double sigma1() const { return sigma.x; }
    double sigma2() const { return sigma.y; }

    AffineMap2<double> gX() const { return {Omega, rho}; }
    AffineMap2<double> gY() const { return {Gamma, sigma}; }
};

inline constexpr double kUnitEigenTol = 1e-9;

/// det(M_X) - 1 and trace(M_X) - 2.
inline std::pair<double, double> unit_eigen_residuals(const Params& p, const Word& X) {
    return {word_det(p, X) - 1.0, compose_word(p, X).matrix.trace() - 2.0};
}

/// Eigenvector slope nu of M_X for eigenvalue 1 from the null space of M_X - I.
/// Throws VerticalEigenvectorError if the null vector is [0,1]^T.
inline double unit_eigenvector_slope(const Mat2<double>& M, double tol = kUnitEigenTol) {
    const double a = M.a - 1.0, b = M.b, c = M.c, d = M.d - 1.0;
    // null vectors of [[a,b],[c,d]] from either row
    const Vec2<double> v1{-b, a};
    const Vec2<double> v2{-d, c};
    const Vec2<double> v = norm(v1) >= norm(v2) ? v1 : v2;
    const double n = norm(v);
    if (n == 0.0) throw FrameError("M_X - I vanishes (geometric multiplicity 2)");
    if (std::abs(v.x) <= tol * n) throw VerticalEigenvectorError("[0,1]^T is an eigenvector of M_X");
    return v.y / v.x;
}

/// Frame without the repeated-eigenvalue precondition; used while searching.
inline Codim4Frame frame_unchecked(const Params& p, const Word& X, const Word& Y, double tol = kUnitEigenTol) {
    const AffineMap2<double> fX = compose_word(p, X);
    Codim4Frame fr;
    fr.nu = unit_eigenvector_slope(fX.matrix, tol);
    fr.Q = {1.0, 0.0, fr.nu, 1.0};
    const Vec2<double> origin{0.0, 0.0};
    const AffineMap2<double> gX = conjugate(fX, fr.Q, origin);
    const AffineMap2<double> gY = conjugate(compose_word(p, Y), fr.Q, origin);
    fr.Omega = gX.matrix;
    fr.rho = gX.translation;
    fr.Gamma = gY.matrix;
    fr.sigma = gY.translation;
    return fr;
}

inline Codim4Frame frame(const Params& p, const Word& X, const Word& Y, double tol = kUnitEigenTol) {
    const auto [rd, rt] = unit_eigen_residuals(p, X);
    if (std::abs(rd) > tol || std::abs(rt) > tol)
        throw FrameError("M_X does not have a repeated unit eigenvalue");
    return frame_unchecked(p, X, Y, tol);
}

struct TruncationCoeff {
    double psi11 = 1.0, psi12 = 0.0, psi21 = 0.0, psi22 = 1.0;
    double chi1 = 0.0, chi2 = 0.0;

    Mat2<double> Psi() const { return {psi11, psi12, psi21, psi22}; }
    Vec2<double> chi() const { return {chi1, chi2}; }
};

using TruncationCoeffs = std::vector<TruncationCoeff>;

/// Coefficients of g^{X_{m-1}} o ... o g^{X_0} for m = 0..n_X-1.
inline TruncationCoeffs truncation_coeffs(const Params& p, const Word& X, const Codim4Frame& fr) {
    TruncationCoeffs out;
    out.reserve(X.size());
    AffineMap2<double> f;  // identity
    const Vec2<double> origin{0.0, 0.0};
    for (std::size_t m = 0; m < X.size(); ++m) {
        const AffineMap2<double> g = conjugate(f, fr.Q, origin);
        out.push_back({g.matrix.a, g.matrix.b, g.matrix.c, g.matrix.d, g.translation.x, g.translation.y});
        f = half_map(p, X[m]).after(f);
    }
    return out;
}

/// Eigenline directions [psi11m, psi11m nu + psi21m]^T in (x, y), one per shift of X.
inline std::vector<Vec2<double>> eigenline_directions(const TruncationCoeffs& tc, double nu) {
    std::vector<Vec2<double>> out;
    for (const auto& t : tc) out.push_back({t.psi11, t.psi11 * nu + t.psi21});
    return out;
}

// ----------------------------------------------------------------------------
// Unit-eigenvalue constraint surface

namespace detail {

inline double trace_with_tauL(const Word& X, double tauL, double deltaL, double tauR, double deltaR) {
    return compose_word(Params{tauL, deltaL, tauR, deltaR, 1.0}, X).matrix.trace();
}

/// delta_L with delta_L^{#L} delta_R^{#R} = 1.
inline double delta_left_for_unit_det(std::size_t nL, std::size_t nR, double deltaR) {
    if (deltaR == 0.0) throw ConstraintError("delta_R = 0 cannot give a unit determinant");
    const double target = std::pow(std::abs(deltaR), -static_cast<double>(nR) / static_cast<double>(nL));
    const bool negativeProduct = deltaR < 0.0 && (nR % 2 == 1);  // sign of delta_R^{-#R}
    if (!negativeProduct) return target;
    if (nL % 2 == 0) throw ConstraintError("no real delta_L: delta_L^{#L} would have to be negative");
    return -target;
}

}  // namespace detail

struct UnitEigenConstraint {
    double tauL;
    double deltaL;
};

inline constexpr double kTauLBracket = 10.0;

/// All tau_L in [-kTauLBracket, kTauLBracket] with trace(M_X) = 2, given delta_L from det(M_X) = 1.
inline std::vector<UnitEigenConstraint> unit_eigen_constraints_all(const Word& X, double tauR, double deltaR) {
    const std::size_t nL = X.count(Symbol::L);
    const std::size_t nR = X.count(Symbol::R);
    if (nL == 0) throw ConstraintError("X has no L symbol; tau_L and delta_L do not enter M_X");
    if (nR == 0) return {{2.0, 1.0}};
    const double deltaL = detail::delta_left_for_unit_det(nL, nR, deltaR);
    auto h = [&](double t) { return detail::trace_with_tauL(X, t, deltaL, tauR, deltaR) - 2.0; };

    if (nL == 1) {
        const double h0 = h(0.0);
        const double slope = h(1.0) - h0;
        if (slope == 0.0) throw ConstraintError("trace(M_X) does not depend on tau_L");
        return {{-h0 / slope, deltaL}};
    }

    std::vector<UnitEigenConstraint> out;
    constexpr int kScan = 4000;
    double t0 = -kTauLBracket;
    double h0 = h(t0);
    for (int i = 1; i <= kScan; ++i) {
        const double t1 = -kTauLBracket + 2.0 * kTauLBracket * i / kScan;
        const double h1 = h(t1);
        if (h0 == 0.0) {
            out.push_back({t0, deltaL});
        } else if (h0 * h1 < 0.0) {
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(h, t0, t1, h0, h1,
                                                             boost::math::tools::eps_tolerance<double>(), iters);
            out.push_back({0.5 * (r.first + r.second), deltaL});
        }
        t0 = t1;
        h0 = h1;
    }
    if (out.empty()) throw ConstraintError("no tau_L in the search bracket gives trace(M_X) = 2");
    return out;
}

/// (tau_L, delta_L) putting a repeated unit eigenvalue on M_X. With several
/// roots the one of smallest |tau_L| is returned.
inline UnitEigenConstraint unit_eigen_constraints(const Word& X, double tauR, double deltaR) {
    const auto all = unit_eigen_constraints_all(X, tauR, deltaR);
    return *std::min_element(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return std::abs(a.tauL) < std::abs(b.tauL);
    });
}

inline Params constrained_params(const Word& X, double tauR, double deltaR, double mu) {
    const UnitEigenConstraint c = unit_eigen_constraints(X, tauR, deltaR);
    return {c.tauL, c.deltaL, tauR, deltaR, mu};
}

// ----------------------------------------------------------------------------
// Report

struct Codim4Report {
    double detResidual = NAN;    // det(M_X) - 1
    double traceResidual = NAN;  // trace(M_X) - 2
    std::optional<Codim4Frame> frame;
    std::vector<double> psi11;
    std::vector<bool> signOk;
    bool verticalEigenvector = false;
    int kFirst = 0, kLast = 0;
    double tol = 0.0;
    ConditionList conditions;

    bool pass() const { return conditions.all_pass(); }
};

struct Codim4CheckOptions {
    int kProbe = 64;            // S[k] examined for k = 1..kProbe
    int multiplierKMax = 100;   // (gamma11, -1) multiplier identity for k = 1..multiplierKMax
};

/// sign(psi11m omega12 rho2) must be -1 exactly when X_m = R.
inline bool sign_condition(Symbol s, double psi11, double omega12, double rho2) {
    const double v = psi11 * omega12 * rho2;
    return s == Symbol::R ? v < 0.0 : v > 0.0;
}

/// Evaluate the repeated-unit-eigenvalue conditions at (p, X, Y).
/// Failures are reported as failed entries, never thrown.
inline Codim4Report check_codim4(const Params& p, const Word& X, const Word& Y, double tol,
                                 const Codim4CheckOptions& opt = {}) {
    Codim4Report r;
    r.tol = tol;
    auto& c = r.conditions;
    c.add_flag("X_primitive", is_primitive(X));
    c.add_flag("X0_ne_Y0", X.front() != Y.front());
    std::tie(r.detResidual, r.traceResidual) = unit_eigen_residuals(p, X);
    c.add_zero("det_MX_minus_1", r.detResidual, tol);
    c.add_zero("trace_MX_minus_2", r.traceResidual, tol);
    if (!c.all_pass()) return r;

    Codim4Frame fr;
    try {
        fr = frame_unchecked(p, X, Y, tol);
    } catch (const VerticalEigenvectorError&) {
        r.verticalEigenvector = true;
        c.add_flag("eigenvector_not_vertical", false);
        return r;
    } catch (const std::exception&) {
        c.add_flag("frame_valid", false);
        return r;
    }
    r.frame = fr;
    c.add_flag("eigenvector_not_vertical", true);
    c.add_nonzero("omega12", fr.omega12(), tol);
    c.add_zero("gamma21", fr.gamma21(), tol);
    c.add_zero("gamma22_plus_1", fr.gamma22() + 1.0, tol);
    c.add_nonzero("rho2", fr.rho2(), tol);

    const TruncationCoeffs tc = truncation_coeffs(p, X, fr);
    for (std::size_t m = 0; m < tc.size(); ++m) {
        const double psi = tc[m].psi11;
        const bool ok = sign_condition(X[m], psi, fr.omega12(), fr.rho2());
        r.psi11.push_back(psi);
        r.signOk.push_back(ok);
        c.add_nonzero("psi11_" + std::to_string(m), psi, tol);
        c.add("sign_psi11_omega12_rho2_" + std::to_string(m), psi * fr.omega12() * fr.rho2(), 0.0, ok);
    }

    if (std::abs(p.deltaL - 1.0) <= tol && std::abs(p.deltaR - 1.0) <= tol)
        c.add_zero("gamma11_plus_1", fr.gamma11() + 1.0, tol);

    // Multipliers (gamma11, -1): compare through trace and det, which are
    // well conditioned even when the two multipliers coincide.
    double worst = 0.0;
    for (int k = 1; k <= opt.multiplierKMax; ++k) {
        const Word w = family_word(X, k, Y);
        const Mat2<double> M = compose_word(p, w).matrix;
        const double s = 1.0 + max_abs(M);
        worst = std::max(worst, std::abs(M.trace() - (fr.gamma11() - 1.0)) / s);
        worst = std::max(worst, std::abs(word_det(p, w) + fr.gamma11()) / s);
    }
    c.add_zero("Sk_multipliers_gamma11_and_minus1", worst, tol);

    // Finite stand-in for infinitely many admissible stable S[k]-cycles.
    int kFirst = 0;
    for (int k = opt.kProbe; k >= 1; --k) {
        bool ok = false;
        try {
            const Cycle cyc = solve_cycle(p, family_word(X, k, Y));
            const double stol = tol * (1.0 + std::abs(cyc.traceM) + std::abs(cyc.detM));
            const Stability st = classify_stability(cyc.detM, cyc.traceM, stol);
            ok = (st == Stability::Attracting || st == Stability::StableNonAttracting) &&
                 classify_admissibility(cyc) == Admissibility::Admissible;
        } catch (const UnitEigenvalueError&) {
        }
        if (!ok) break;
        kFirst = k;
    }
    r.kFirst = kFirst;
    r.kLast = opt.kProbe;
    c.add("Sk_admissible_stable_from_k", kFirst, opt.kProbe * 3 / 4, kFirst >= 1 && kFirst <= opt.kProbe * 3 / 4);
    return r;
}

// ----------------------------------------------------------------------------
// Search

struct Box {
    double tauRMin = -3.0, tauRMax = 3.0;
    double deltaRMin = 0.5, deltaRMax = 2.0;
};

struct ViabilityProbe {
    bool viable = false;      // admissible and stable for all k in [kFirst, kProbe]
    bool allVirtual = false;  // no admissible S[k] for any k <= kProbe
    int kFirst = 0;
    int kProbe = 0;
};

inline ViabilityProbe probe_viability(const Params& p, const Word& X, const Word& Y, int kProbe = 64,
                                      double tol = 1e-6) {
    ViabilityProbe v;
    v.kProbe = kProbe;
    bool anyAdmissible = false;
    int kFirst = 0;
    bool tailOpen = true;
    for (int k = kProbe; k >= 1; --k) {
        bool ok = false;
        try {
            const Cycle cyc = solve_cycle(p, family_word(X, k, Y));
            const bool adm = classify_admissibility(cyc) == Admissibility::Admissible;
            anyAdmissible = anyAdmissible || adm;
            const double stol = tol * (1.0 + std::abs(cyc.traceM) + std::abs(cyc.detM));
            const Stability st = classify_stability(cyc.detM, cyc.traceM, stol);
            ok = adm && (st == Stability::Attracting || st == Stability::StableNonAttracting);
        } catch (const UnitEigenvalueError&) {
        }
        if (tailOpen && ok) kFirst = k;
        else tailOpen = false;
    }
    v.kFirst = kFirst;
    v.viable = kFirst >= 1 && kFirst <= kProbe * 3 / 4;
    v.allVirtual = !anyAdmissible;
    return v;
}

struct Codim4Candidate {
    Params params;
    double residualGamma21 = NAN;
    double residualGamma22 = NAN;  // gamma22 + 1
    double residualDet = NAN;
    double residualTrace = NAN;
    ViabilityProbe probe;
    bool reportPass = false;
};

struct FindCodim4Options {
    int grid = 200;
    double newtonTol = 1e-12;
    int newtonMaxIter = 100;
    double dedupeTol = 1e-7;
    int kProbe = 64;
    double checkTol = 1e-6;
    /// Roots whose Jacobian has |det J| <= isolationTol * |J|^2 lie on a curve
    /// of solutions rather than being isolated points; they are not reported.
    double isolationTol = 1e-6;
    unsigned workers = 1;
};

namespace detail {

struct Residual2 {
    double f1 = NAN, f2 = NAN;
    bool ok() const { return std::isfinite(f1) && std::isfinite(f2); }
    double norm_inf() const { return std::max(std::abs(f1), std::abs(f2)); }
};

/// (gamma21, gamma22 + 1) on the unit-eigenvalue surface.
inline Residual2 codim4_residual(const Word& X, const Word& Y, double mu, double tauR, double deltaR) {
    try {
        const Params p = constrained_params(X, tauR, deltaR, mu);
        const Codim4Frame fr = frame_unchecked(p, X, Y, 0.0);
        return {fr.gamma21(), fr.gamma22() + 1.0};
    } catch (const std::exception&) {
        return {};
    }
}

struct Jacobian2 {
    double j11 = NAN, j12 = NAN, j21 = NAN, j22 = NAN;
    bool ok() const { return std::isfinite(j11) && std::isfinite(j12) && std::isfinite(j21) && std::isfinite(j22); }
    double det() const { return j11 * j22 - j12 * j21; }
    double norm2() const { return j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22; }
};

inline Jacobian2 codim4_jacobian(const Word& X, const Word& Y, double mu, double tR, double dR) {
    const double ht = 1e-7 * (1.0 + std::abs(tR));
    const double hd = 1e-7 * (1.0 + std::abs(dR));
    const Residual2 Ftp = codim4_residual(X, Y, mu, tR + ht, dR);
    const Residual2 Ftm = codim4_residual(X, Y, mu, tR - ht, dR);
    const Residual2 Fdp = codim4_residual(X, Y, mu, tR, dR + hd);
    const Residual2 Fdm = codim4_residual(X, Y, mu, tR, dR - hd);
    if (!Ftp.ok() || !Ftm.ok() || !Fdp.ok() || !Fdm.ok()) return {};
    return {(Ftp.f1 - Ftm.f1) / (2 * ht), (Fdp.f1 - Fdm.f1) / (2 * hd), (Ftp.f2 - Ftm.f2) / (2 * ht),
            (Fdp.f2 - Fdm.f2) / (2 * hd)};
}

inline bool newton2(const Word& X, const Word& Y, double mu, double& tR, double& dR, const FindCodim4Options& opt) {
    Residual2 F = codim4_residual(X, Y, mu, tR, dR);
    if (!F.ok()) return false;
    for (int it = 0; it < opt.newtonMaxIter; ++it) {
        if (F.norm_inf() <= opt.newtonTol) return true;
        const Jacobian2 J = codim4_jacobian(X, Y, mu, tR, dR);
        if (!J.ok()) return false;
        const double j11 = J.j11, j12 = J.j12, j21 = J.j21, j22 = J.j22;
        const double det = J.det();
        if (det == 0.0 || !std::isfinite(det)) return false;
        const double st = (F.f1 * j22 - j12 * F.f2) / det;
        const double sd = (j11 * F.f2 - j21 * F.f1) / det;
        double lam = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
            const double nt = tR - lam * st, nd = dR - lam * sd;
            const Residual2 Fn = codim4_residual(X, Y, mu, nt, nd);
            if (Fn.ok() && Fn.norm_inf() < F.norm_inf()) {
                tR = nt;
                dR = nd;
                F = Fn;
                moved = true;
                break;
            }
        }
        if (!moved) return F.norm_inf() <= opt.newtonTol;
    }
    return F.norm_inf() <= opt.newtonTol;
}

inline bool sign_change(double a, double b, double c, double d) {
    const double lo = std::min({a, b, c, d});
    const double hi = std::max({a, b, c, d});
    return lo <= 0.0 && hi >= 0.0;
}

}  // namespace detail

/// Scan (tau_R, delta_R) over the box on the unit-eigenvalue surface, refine
/// common zeros of gamma21 and gamma22 + 1 by Newton, then probe viability.
inline std::vector<Codim4Candidate> find_codim4(const Word& X, const Word& Y, double mu, const Box& box,
                                                const FindCodim4Options& opt = {}) {
    const int n = opt.grid;
    if (n < 2) throw std::invalid_argument("grid must be at least 2");
    auto tau_at = [&](int i) { return box.tauRMin + (box.tauRMax - box.tauRMin) * i / (n - 1); };
    auto delta_at = [&](int j) { return box.deltaRMin + (box.deltaRMax - box.deltaRMin) * j / (n - 1); };

    std::vector<detail::Residual2> grid(static_cast<std::size_t>(n) * n);
    parallel_for(grid.size(), opt.workers, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / n), j = static_cast<int>(idx % n);
        grid[idx] = detail::codim4_residual(X, Y, mu, tau_at(i), delta_at(j));
    });
    auto at = [&](int i, int j) -> const detail::Residual2& { return grid[static_cast<std::size_t>(i) * n + j]; };

    struct Cell {
        int i, j;
    };
    std::vector<Cell> cells;
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j + 1 < n; ++j) {
            const auto &a = at(i, j), &b = at(i + 1, j), &c = at(i, j + 1), &d = at(i + 1, j + 1);
            if (!a.ok() || !b.ok() || !c.ok() || !d.ok()) continue;
            if (detail::sign_change(a.f1, b.f1, c.f1, d.f1) && detail::sign_change(a.f2, b.f2, c.f2, d.f2))
                cells.push_back({i, j});
        }

    struct Refined {
        bool ok = false;
        double tR = 0, dR = 0;
    };
    std::vector<Refined> refined(cells.size());
    parallel_for(cells.size(), opt.workers, [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const double starts[5][2] = {{0.5, 0.5}, {0, 0}, {1, 0}, {0, 1}, {1, 1}};
        for (const auto& s : starts) {
            double tR = tau_at(cell.i) + s[0] * (tau_at(cell.i + 1) - tau_at(cell.i));
            double dR = delta_at(cell.j) + s[1] * (delta_at(cell.j + 1) - delta_at(cell.j));
            if (detail::newton2(X, Y, mu, tR, dR, opt)) {
                refined[ci] = {true, tR, dR};
                return;
            }
        }
    });

    const double padT = (box.tauRMax - box.tauRMin) / (n - 1);
    const double padD = (box.deltaRMax - box.deltaRMin) / (n - 1);
    std::vector<Codim4Candidate> out;
    for (const Refined& r : refined) {
        if (!r.ok) continue;
        if (r.tR < box.tauRMin - padT || r.tR > box.tauRMax + padT || r.dR < box.deltaRMin - padD ||
            r.dR > box.deltaRMax + padD)
            continue;
        bool dup = false;
        for (const auto& c : out)
            if (std::abs(c.params.tauR - r.tR) <= opt.dedupeTol && std::abs(c.params.deltaR - r.dR) <= opt.dedupeTol)
                dup = true;
        if (dup) continue;
        const detail::Jacobian2 J = detail::codim4_jacobian(X, Y, mu, r.tR, r.dR);
        if (!J.ok() || std::abs(J.det()) <= opt.isolationTol * J.norm2()) continue;
        Codim4Candidate cand;
        cand.params = constrained_params(X, r.tR, r.dR, mu);
        const detail::Residual2 F = detail::codim4_residual(X, Y, mu, r.tR, r.dR);
        cand.residualGamma21 = F.f1;
        cand.residualGamma22 = F.f2;
        std::tie(cand.residualDet, cand.residualTrace) = unit_eigen_residuals(cand.params, X);
        cand.probe = probe_viability(cand.params, X, Y, opt.kProbe, opt.checkTol);
        cand.reportPass = check_codim4(cand.params, X, Y, opt.checkTol, {opt.kProbe, opt.kProbe}).pass();
        out.push_back(cand);
    }
    return out;
}

// ----------------------------------------------------------------------------
// Perturbation coefficients

struct AlphaBeta {
    double alpha = 0.0;  // d/de det(M_X) at 0
    double beta = 0.0;   // d/de trace(M_X) at 0
};

inline AlphaBeta alpha_beta(const Family& fam, const Word& X) {
    using D = Dual<double>;
    const BasicParams<D> p = family_params<D>(fam, D::variable(0.0));
    return {word_det(p, X).eps, compose_word(p, X).matrix.trace().eps};
}

struct Polar {
    double r = NAN;      // modulus (spectral radius for a real pair)
    double theta = NAN;  // argument of the upper eigenvalue; NaN for a real pair
    bool complexPair = false;
};

inline Polar r_theta(const Family& fam, const Word& X, double eps) {
    const Params p = family_params(fam, eps);
    const double tr = compose_word(p, X).matrix.trace();
    const double det = word_det(p, X);
    const double disc = det - 0.25 * tr * tr;
    if (disc > 0.0) return {std::sqrt(det), std::atan2(std::sqrt(disc), 0.5 * tr), true};
    const Multipliers m = multipliers_from(tr, det);
    return {std::max(std::abs(m.first), std::abs(m.second)), NAN, false};
}

/// Upper bound 4 pi^2 / (alpha - beta) on eps k^2 for attracting S[k]-cycles.
inline double codim4_bound_constant(const AlphaBeta& ab) {
    return 4.0 * M_PI * M_PI / (ab.alpha - ab.beta);
}

}  // namespace bcnf
