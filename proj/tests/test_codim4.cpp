#include <gtest/gtest.h>

#include <bcnf/codim4.hpp>
#include <bcnf/presets.hpp>

#include <array>
#include <cmath>
#include <random>

using namespace bcnf;

namespace {

const double kR2 = std::sqrt(2.0);
const double kR5 = std::sqrt(5.0);

struct Case {
    const char* name;
    Params p;
    Word X, Y;
    double tol;
    Direction dir;
};

std::vector<Case> codim4_points() {
    return {{"A", presets::paramA(), "RRL"_w, "LRLL"_w, 1e-9, presets::abcdA},
            {"B", presets::paramB(), "RRRL"_w, "LRRLL"_w, 1e-6, presets::abcdB},
            {"K", presets::paramK(), "L"_w, "RRRRR"_w, 1e-9, presets::abcdK}};
}

Family family_of(const Case& c) { return {c.p, c.dir, c.X, c.Y, Scenario::Codim4}; }

/// Least-squares quadratic a j^2 + b j + c through (j, y); returns a.
double quadratic_leading(const std::vector<double>& j, const std::vector<double>& y) {
    long double S[5] = {0, 0, 0, 0, 0}, T[3] = {0, 0, 0};
    for (std::size_t i = 0; i < j.size(); ++i) {
        long double p = 1;
        for (int e = 0; e < 5; ++e) {
            S[e] += p;
            if (e < 3) T[e] += p * y[i];
            p *= j[i];
        }
    }
    // normal equations [[S4 S3 S2][S3 S2 S1][S2 S1 S0]] (a b c) = (T2 T1 T0)
    auto det3 = [](long double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    long double A[3][3] = {{S[4], S[3], S[2]}, {S[3], S[2], S[1]}, {S[2], S[1], S[0]}};
    long double Aa[3][3] = {{T[2], S[3], S[2]}, {T[1], S[2], S[1]}, {T[0], S[1], S[0]}};
    return static_cast<double>(det3(Aa) / det3(A));
}

}  // namespace

TEST(UnitEigenConstraints, ParamA) {
    const UnitEigenConstraint c = unit_eigen_constraints("RRL"_w, 1.0 - kR2, 1.0);
    EXPECT_NEAR(c.tauL, -kR2, 1e-12);
    EXPECT_NEAR(c.deltaL, 1.0, 1e-15);
}

TEST(UnitEigenConstraints, AllLeft) {
    for (double tR : {-2.0, 0.3, 1.7}) {
        const UnitEigenConstraint c = unit_eigen_constraints("L"_w, tR, 0.8);
        EXPECT_EQ(c.tauL, 2.0);
        EXPECT_EQ(c.deltaL, 1.0);
    }
    EXPECT_THROW(unit_eigen_constraints("RR"_w, 0.5, 1.0), ConstraintError);
}

TEST(UnitEigenConstraints, RRLFormula) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> tR(-2.0, 2.0), dR(0.6, 1.8);
    int checked = 0;
    for (int n = 0; n < 300; ++n) {
        const double t = tR(rng), d = dR(rng);
        if (std::abs(d - t * t) < 0.05) continue;
        const double expected = -(t * d * d * d + 2.0 * d * d + t) / (d * d * (d - t * t));
        UnitEigenConstraint c;
        try {
            c = unit_eigen_constraints("RRL"_w, t, d);
        } catch (const ConstraintError&) {
            continue;  // outside the tau_L bracket
        }
        ++checked;
        EXPECT_NEAR(c.tauL, expected, 1e-10 * (1.0 + std::abs(expected)));
        EXPECT_NEAR(c.deltaL, 1.0 / (d * d), 1e-12);
        const auto [rd, rt] = unit_eigen_residuals(constrained_params("RRL"_w, t, d, 1.0), "RRL"_w);
        EXPECT_NEAR(rd, 0.0, 1e-12);
        EXPECT_NEAR(rt, 0.0, 1e-9);
    }
    EXPECT_GT(checked, 200);
}

TEST(UnitEigenConstraints, MultipleLeftSymbolsSatisfyResiduals) {
    for (const Word& X : {"RRLL"_w, "RLLL"_w, "RRLRL"_w}) {
        const auto all = unit_eigen_constraints_all(X, 0.4, 1.1);
        ASSERT_FALSE(all.empty()) << X.str();
        for (const auto& c : all) {
            const Params p{c.tauL, c.deltaL, 0.4, 1.1, 1.0};
            const auto [rd, rt] = unit_eigen_residuals(p, X);
            EXPECT_NEAR(rd, 0.0, 1e-12);
            EXPECT_NEAR(rt, 0.0, 1e-9);
        }
    }
}

TEST(Frame, SlopesAndCoefficients) {
    const Codim4Frame a = frame(presets::paramA(), "RRL"_w, "LRLL"_w);
    EXPECT_NEAR(a.nu, kR2, 1e-12);
    EXPECT_NEAR(a.gamma21(), 0.0, 1e-10);
    EXPECT_NEAR(a.gamma22(), -1.0, 1e-10);
    EXPECT_NEAR(a.gamma11(), -1.0, 1e-10);
    const Codim4Frame k = frame(presets::paramK(), "L"_w, "RRRRR"_w);
    EXPECT_NEAR(k.nu, -1.0, 1e-12);
    EXPECT_THROW(frame(presets::paramF(), "RLR"_w, "LR"_w), FrameError);
}

TEST(Frame, VerticalEigenvectorRejected) {
    // M - I = [[0, 0], [1, 0]] has null vector [0, 1]^T
    EXPECT_THROW(unit_eigenvector_slope(Mat2<double>{1.0, 0.0, 1.0, 1.0}), VerticalEigenvectorError);
}

TEST(Properties, FrameConjugationBothMaps) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& c : codim4_points()) {
        const Codim4Frame fr = frame(c.p, c.X, c.Y, c.tol);
        const AffineMap2<double> fX = compose_word(c.p, c.X), fY = compose_word(c.p, c.Y);
        // triangular with unit diagonal
        EXPECT_NEAR(fr.Omega.a, 1.0, 1e-9) << c.name;
        EXPECT_NEAR(fr.Omega.d, 1.0, 1e-9) << c.name;
        EXPECT_NEAR(fr.Omega.c, 0.0, 1e-9) << c.name;
        EXPECT_GT(std::abs(fr.omega12()), 1e-6) << c.name;
        for (int n = 0; n < 100; ++n) {
            const Vec2<double> w{u(rng), u(rng)};
            EXPECT_LE(norm(fr.Q * fr.gX()(w) - fX(fr.Q * w)), 1e-10) << c.name;
            EXPECT_LE(norm(fr.Q * fr.gY()(w) - fY(fr.Q * w)), 1e-10) << c.name;
        }
    }
}

TEST(Properties, GXPowerClosedForm) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& c : {codim4_points()[0], codim4_points()[2]}) {
        const Codim4Frame fr = frame(c.p, c.X, c.Y, c.tol);
        const double w12 = fr.omega12(), r1 = fr.rho1(), r2 = fr.rho2();
        for (int n = 0; n < 10; ++n) {
            const Vec2<double> w0{u(rng), u(rng)};
            Vec2<double> w = w0;
            for (int k = 1; k <= 50; ++k) {
                w = fr.gX()(w);
                const double kk = k;
                const Vec2<double> closed{w0.x + w12 * kk * w0.y + r1 * kk + r2 * w12 * kk * (kk - 1.0) / 2.0,
                                          w0.y + r2 * kk};
                EXPECT_LE(norm(w - closed), 1e-8 * (1.0 + norm(closed))) << c.name << " k=" << k;
            }
        }
    }
}

TEST(Truncation, IdentityAtZeroAndSignConditions) {
    for (const auto& c : codim4_points()) {
        const Codim4Frame fr = frame(c.p, c.X, c.Y, c.tol);
        const TruncationCoeffs tc = truncation_coeffs(c.p, c.X, fr);
        ASSERT_EQ(tc.size(), c.X.size());
        EXPECT_EQ(tc[0].psi11, 1.0);
        EXPECT_EQ(tc[0].psi12, 0.0);
        EXPECT_EQ(tc[0].psi21, 0.0);
        EXPECT_EQ(tc[0].psi22, 1.0);
        EXPECT_EQ(tc[0].chi1, 0.0);
        EXPECT_EQ(tc[0].chi2, 0.0);
        for (std::size_t m = 0; m < tc.size(); ++m) {
            EXPECT_GT(std::abs(tc[m].psi11), 1e-9) << c.name << " m=" << m;
            EXPECT_GT(std::abs(tc[m].Psi().det()), 1e-9);
            EXPECT_TRUE(sign_condition(c.X[m], tc[m].psi11, fr.omega12(), fr.rho2())) << c.name << " m=" << m;
        }
    }
}

TEST(Truncation, ParamAEigenlines) {
    const Params p = presets::paramA();
    const Codim4Frame fr = frame(p, "RRL"_w, "LRLL"_w);
    const auto dirs = eigenline_directions(truncation_coeffs(p, "RRL"_w, fr), fr.nu);
    ASSERT_EQ(dirs.size(), 3u);
    // each direction is the unit eigenvector of the matching shifted product
    for (std::size_t m = 0; m < 3; ++m) {
        const Mat2<double> M = compose_word(p, shift("RRL"_w, m)).matrix;
        const Vec2<double> r = M * dirs[m] - dirs[m];
        EXPECT_LE(norm(r), 1e-12 * (1.0 + norm(dirs[m]))) << m;
    }
}

TEST(CheckCodim4, PresetPointsPass) {
    for (const auto& c : codim4_points()) {
        const Codim4Report r = check_codim4(c.p, c.X, c.Y, c.tol);
        EXPECT_TRUE(r.pass()) << c.name;
        for (const auto& e : r.conditions.conditions) EXPECT_TRUE(e.pass) << c.name << ": " << e.name;
        ASSERT_TRUE(r.frame.has_value());
        EXPECT_FALSE(r.verticalEigenvector);
    }
}

TEST(CheckCodim4, CodimThreePointFails) {
    const Codim4Report r = check_codim4(presets::paramF(), "RLR"_w, "LR"_w, 1e-9);
    EXPECT_FALSE(r.pass());
    EXPECT_FALSE(r.conditions.find("trace_MX_minus_2")->pass);
}

TEST(Properties, SkMultipliersConstant) {
    for (const auto& c : codim4_points()) {
        const double g11 = frame(c.p, c.X, c.Y, c.tol).gamma11();
        for (int k = 1; k <= 100; ++k) {
            const Mat2<double> M = compose_word(c.p, family_word(c.X, k, c.Y)).matrix;
            const double s = 1.0 + max_abs(M);
            // eigenvalues (g11, -1) iff trace = g11 - 1 and det = -g11
            EXPECT_LE(std::abs(M.trace() - (g11 - 1.0)) / s, 1e-8) << c.name << " k=" << k;
            EXPECT_LE(std::abs(M.det() + g11) / s, 1e-8) << c.name << " k=" << k;
        }
    }
}

struct TaylorCoeffs {
    double trace, det;  // first eps-derivatives of trace and det of M_S[k] at 0
};

TaylorCoeffs taylor_coeffs(const Family& fam, int k) {
    using D = Dual<double>;
    const BasicParams<D> pd = family_params<D>(fam, D::variable(0.0));
    const Word S = family_word(fam.X, k, fam.Y);
    return {compose_word(pd, S).matrix.trace().eps, word_det(pd, S).eps};
}

TEST(Properties, TaylorRateDet) {
    for (const auto& c : codim4_points()) {
        const AlphaBeta ab = alpha_beta(family_of(c), c.X);
        for (int k : {20, 40, 80}) {
            const double det = taylor_coeffs(family_of(c), k).det / k;
            EXPECT_LE(std::abs(det - ab.alpha) / std::abs(ab.alpha), 5.0 / k) << c.name << " k=" << k;
        }
    }
}

// Stated bound: relative error of trace'/k^2 against alpha - beta at most 5/k.
// Fails at all three points; see TraceDerivativeIsQuadraticInK for the actual constant.
TEST(Properties, TaylorRateTrace) {
    for (const auto& c : codim4_points()) {
        const AlphaBeta ab = alpha_beta(family_of(c), c.X);
        for (int k : {20, 40, 80}) {
            const double tr = taylor_coeffs(family_of(c), k).trace / (double(k) * k);
            EXPECT_LE(std::abs(tr - (ab.alpha - ab.beta)) / std::abs(ab.alpha - ab.beta), 5.0 / k)
                << c.name << " k=" << k;
        }
    }
}

TEST(Properties, TraceDerivativeIsQuadraticInK) {
    // independent oracle: central differences of the float trace
    for (const auto& c : codim4_points()) {
        const Family fam = family_of(c);
        const AlphaBeta ab = alpha_beta(fam, c.X);
        std::vector<double> t;
        for (int k = 10; k <= 14; ++k) t.push_back(taylor_coeffs(fam, k).trace);
        for (std::size_t i = 0; i + 3 < t.size(); ++i)
            EXPECT_NEAR(t[i + 3] - 3 * t[i + 2] + 3 * t[i + 1] - t[i], 0.0, 1e-9) << c.name;
        EXPECT_NEAR((t[2] - 2 * t[1] + t[0]) / 2.0, ab.alpha - ab.beta, 1e-9) << c.name;
        for (int k : {20, 80}) {
            const Word S = family_word(c.X, k, c.Y);
            const double h = 1e-7;
            const double fd = (compose_word(family_params(fam, h), S).matrix.trace() -
                               compose_word(family_params(fam, -h), S).matrix.trace()) /
                              (2 * h);
            EXPECT_NEAR(fd, taylor_coeffs(fam, k).trace, 1e-5 * (1.0 + std::abs(fd))) << c.name << " k=" << k;
        }
    }
    // frozen k-coefficient of trace' relative to alpha - beta
    const std::pair<const char*, double> c1[] = {{"A", 8.536}, {"B", 7.346}, {"K", 12.056}};
    for (const auto& [name, expected] : c1) {
        const Family fam = presets::family(*presets::find(name));
        const AlphaBeta ab = alpha_beta(fam, fam.X);
        const double t10 = taylor_coeffs(fam, 10).trace, t11 = taylor_coeffs(fam, 11).trace;
        const double a1 = (t11 - t10) - (ab.alpha - ab.beta) * 21.0;
        EXPECT_NEAR(a1 / (ab.alpha - ab.beta), expected, 1e-3) << name;
    }
}

TEST(Properties, ParabolaCoefficient) {
    const int k = 100;
    for (const auto& c : {codim4_points()[0], codim4_points()[2]}) {
        const Codim4Frame fr = frame(c.p, c.X, c.Y, c.tol);
        const Cycle cyc = solve_cycle(c.p, family_word(c.X, k, c.Y));
        std::vector<double> j, u;
        for (int jj = 0; jj <= k; ++jj) {
            j.push_back(jj);
            u.push_back(cyc.points[jj * c.X.size()].x);  // u = x in the triangular frame
        }
        // u = c j(k - j) + O(j, k): the j^2 coefficient of the fit is -c
        const double lead = -quadratic_leading(j, u);
        const double expected = -fr.omega12() * fr.rho2() / 2.0;
        EXPECT_LE(std::abs(lead - expected) / std::abs(expected), 0.02) << c.name << " lead=" << lead;
    }
}

TEST(AlphaBeta, ClosedForms) {
    const AlphaBeta a = alpha_beta({presets::paramA(), presets::abcdA, "RRL"_w, "LRLL"_w, Scenario::Codim4}, "RRL"_w);
    EXPECT_NEAR(a.alpha, -1.0, 1e-12);
    EXPECT_NEAR(a.beta, -3.0 * (kR2 - 1.0), 1e-12);
    EXPECT_LT(a.beta, a.alpha);
    EXPECT_LT(a.alpha, 0.0);
    const AlphaBeta k = alpha_beta({presets::paramK(), presets::abcdK, "L"_w, "RRRRR"_w, Scenario::Codim4}, "L"_w);
    EXPECT_NEAR(k.alpha, -1.0, 1e-12);
    EXPECT_NEAR(k.beta, -2.0, 1e-12);
    const AlphaBeta z = alpha_beta({presets::paramA(), {}, "RRL"_w, "LRLL"_w, Scenario::Codim4}, "RRL"_w);
    EXPECT_EQ(z.alpha, 0.0);
    EXPECT_EQ(z.beta, 0.0);
}

TEST(RTheta, SmallEpsilon) {
    const Family fam{presets::paramA(), presets::abcdA, "RRL"_w, "LRLL"_w, Scenario::Codim4};
    const AlphaBeta ab = alpha_beta(fam, fam.X);
    const Polar p6 = r_theta(fam, fam.X, 1e-6);
    ASSERT_TRUE(p6.complexPair);
    // direct eigenvalue oracle at the same eps
    const Mat2<double> M = compose_word(family_params(fam, 1e-6), fam.X).matrix;
    const Multipliers m = multipliers(M);
    ASSERT_TRUE(m.complex);
    EXPECT_NEAR(p6.theta, std::atan2(m.im(), m.re()), 1e-12);
    EXPECT_LE(std::abs(p6.theta - std::sqrt(ab.alpha - ab.beta) * 1e-3) / p6.theta, 0.01);
    EXPECT_LT(r_theta(fam, fam.X, 1e-4).r, 1.0);
    const Polar p0 = r_theta(fam, fam.X, 0.0);
    EXPECT_FALSE(p0.complexPair);
    EXPECT_TRUE(std::isnan(p0.theta));
}

TEST(Properties, XCycleCompletelyVirtual) {
    const Family fam{presets::paramA(), presets::abcdA, "RRL"_w, "LRLL"_w, Scenario::Codim4};
    for (double eps : {1e-5, 1e-4, 1e-3}) {
        const Cycle c = solve_cycle(family_params(fam, eps), fam.X);
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LT(c.margins[i], 0.0) << "eps=" << eps << " i=" << i;
    }
}

TEST(FindCodim4, ParamAPair) {
    FindCodim4Options opt;
    opt.workers = 4;
    const auto roots = find_codim4("RRL"_w, "LRLL"_w, 1.0, Box{}, opt);
    bool viable = false, virt = false;
    for (const auto& r : roots) {
        if (std::abs(r.params.tauR - (1.0 - kR2)) < 1e-8 && std::abs(r.params.deltaR - 1.0) < 1e-8) {
            viable = r.probe.viable && r.reportPass;
            EXPECT_NEAR(r.params.tauL, -kR2, 1e-8);
        }
        if (std::abs(r.params.tauR - (1.0 + kR2)) < 1e-8 && std::abs(r.params.deltaR - 1.0) < 1e-8)
            virt = r.probe.allVirtual;
    }
    EXPECT_TRUE(viable);
    EXPECT_TRUE(virt);
}

TEST(FindCodim4, ParamKPair) {
    const auto roots = find_codim4("L"_w, "RRRRR"_w, 1.0, Box{}, {});
    ASSERT_EQ(roots.size(), 2u);
    bool viable = false, virt = false;
    for (const auto& r : roots) {
        if (std::abs(r.params.tauR - (1.0 + kR5) / 2.0) < 1e-8) viable = r.probe.viable && r.probe.kFirst == 11;
        if (std::abs(r.params.tauR - (1.0 - kR5) / 2.0) < 1e-8) virt = r.probe.allVirtual;
        EXPECT_NEAR(r.params.deltaR, 1.0, 1e-8);
    }
    EXPECT_TRUE(viable);
    EXPECT_TRUE(virt);
}

TEST(FindCodim4, ParamBRoot) {
    FindCodim4Options opt;
    opt.workers = 4;
    const auto roots = find_codim4("RRRL"_w, "LRRLL"_w, 1.0, Box{}, opt);
    const Params b = presets::paramB();
    bool found = false;
    for (const auto& r : roots)
        if (std::abs(r.params.tauR - b.tauR) < 1e-8 && std::abs(r.params.deltaR - 1.0) < 1e-8) {
            found = r.probe.viable && r.probe.kFirst == 4;
            EXPECT_NEAR(r.params.tauL, -1.1629, 1e-4);
            EXPECT_NEAR(r.params.tauL, 2.0 * b.tauR / (b.tauR * b.tauR - 2.0), 1e-8);
        }
    EXPECT_TRUE(found);
    const double t = b.tauR;
    EXPECT_NEAR(((t - 1.0) * t - 3.0) * t * t + 2.0, 0.0, 1e-14);
}

TEST(FindCodim4, DeterministicAcrossWorkerCounts) {
    FindCodim4Options o1, o4;
    o1.grid = o4.grid = 60;
    o4.workers = 4;
    const auto a = find_codim4("RRL"_w, "LRLL"_w, 1.0, Box{}, o1);
    const auto b = find_codim4("RRL"_w, "LRLL"_w, 1.0, Box{}, o4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].params, b[i].params);
}

TEST(Si10, SixAttractingCyclesAndNeitherScenario) {
    const auto pr = *presets::find("Si10");
    std::vector<int> ks;
    for (int k = 0; k <= 200; ++k) {
        try {
            const Cycle c = solve_cycle(pr.params, family_word(pr.X, k, pr.Y));
            if (classify_admissibility(c) == Admissibility::Admissible && c.stability == Stability::Attracting)
                ks.push_back(k);
        } catch (const UnitEigenvalueError&) {
        }
    }
    EXPECT_EQ(ks, (std::vector<int>{7, 8, 9, 10, 11, 12}));
    EXPECT_FALSE(check_codim4(pr.params, pr.X, pr.Y, pr.tol).pass());
    EXPECT_FALSE(check_codim3(pr.params, pr.X, pr.Y, pr.tol).pass());
}
