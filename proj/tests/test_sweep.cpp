#include <gtest/gtest.h>

#include <bcnf/presets.hpp>
#include <bcnf/sweep.hpp>

#include <cmath>
#include <cstring>

using namespace bcnf;

namespace {

Family fam(const char* name) { return presets::family(*presets::find(name)); }

SweepOptions threaded() {
    SweepOptions o;
    o.workers = 4;
    return o;
}

}  // namespace

TEST(FamilyParams, AffineEvaluation) {
    const Family f = fam("F");
    const Params p = family_params(f, 0.1);
    EXPECT_DOUBLE_EQ(p.deltaL, 4.0 / 9.0 + 0.1);
    EXPECT_EQ(p.tauL, f.base.tauL);
    EXPECT_EQ(p.tauR, f.base.tauR);
    EXPECT_EQ(p.deltaR, f.base.deltaR);
    EXPECT_EQ(family_params(f, 0.0), f.base);
    const Params a = family_params(fam("A"), 0.009);
    EXPECT_DOUBLE_EQ(a.tauL, -std::sqrt(2.0) + 0.009);
    EXPECT_DOUBLE_EQ(a.deltaL, 1.0 - 0.009);
}

TEST(SweepGrid, GeometricSpacing) {
    const auto g = sweep_grid(0.5);
    ASSERT_GT(g.size(), 10u);
    EXPECT_NEAR(g.front(), 1e-12, 1e-24);
    EXPECT_DOUBLE_EQ(g.back(), 0.5);
    // endpoint-aligned: uniform log step, at least 64 points per decade
    const double step = std::log10(g[1] / g[0]);
    EXPECT_LE(step, 1.0 / 64 + 1e-12);
    EXPECT_GT(step, 1.0 / 65);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(std::log10(g[i] / g[i - 1]), step, 1e-9);
}

TEST(KInterval, ParamFFirstThreeCoverReference) {
    const Family f = fam("F");
    for (int k = 1; k <= 3; ++k) {
        const KInterval iv = k_interval(f, k, 0.5);
        EXPECT_GE(iv.epsHi, 0.009) << k;
        EXPECT_EQ(iv.epsLo, 0.0);
        EXPECT_TRUE(iv.verified);
    }
}

TEST(KInterval, ParamASevenNeverValid) {
    const KInterval iv = k_interval(fam("A"), 7, 0.2);
    EXPECT_EQ(iv.event, EventType::NeverValid);
    EXPECT_FALSE(iv.valid());
    const KInterval iv8 = k_interval(fam("A"), 8, 0.2);
    EXPECT_TRUE(iv8.valid());
    EXPECT_EQ(iv8.event, EventType::BorderCollision);
}

TEST(RunSweep, ParamFKappaAndRatios) {
    const Family f = fam("F");
    const SweepResult r = run_sweep(f, 25, 0.5, threaded());
    EXPECT_EQ(r.kappa(0.009), 3);
    for (int k = 1; k <= 3; ++k) EXPECT_TRUE(r.intervals[k - 1].contains(0.009));
    EXPECT_EQ(kappa_direct(f, 25, 0.009), 3);
    EXPECT_NEAR(r.ratioTarget, 6.0 / 13.0, 1e-12);
    for (std::size_t K = 1; K < r.epsK.size(); ++K) EXPECT_LT(r.epsK[K], r.epsK[K - 1]);
    for (const auto& row : r.ratios)
        if (row.K >= 15 && row.K <= 24) { EXPECT_LE(std::abs(row.ratio - 6.0 / 13.0) / (6.0 / 13.0), 0.05) << row.K; }
    EXPECT_EQ(r.kappa(1.0), 0);
}

TEST(RunSweep, ParamAKappaAtReference) {
    const Family f = fam("A");
    const SweepResult r = run_sweep(f, 40, 0.2, threaded());
    EXPECT_EQ(r.kappa(0.009), 5);
    for (int k = 1; k <= 40; ++k) EXPECT_EQ(r.intervals[k - 1].contains(0.009), k >= 10 && k <= 14) << k;
    EXPECT_EQ(kappa_direct(f, 40, 0.009), 5);
    EXPECT_DOUBLE_EQ(r.ratioTarget, 0.25);
}

TEST(Properties, KappaTwoWays) {
    for (const char* name : {"F", "C", "A", "K"}) {
        const Family f = fam(name);
        const int kMax = 24;
        const double epsStar = f.scenario == Scenario::Codim3 ? 0.5 : 0.2;
        const SweepResult r = run_sweep(f, kMax, epsStar, threaded());
        for (double eps : {1e-6, 3.3e-5, 1e-4, 1.7e-3, 0.009, 0.03, 0.11}) {
            // skip eps within bisection precision of an endpoint
            bool nearEdge = false;
            for (const auto& iv : r.intervals)
                if (iv.valid() && std::abs(eps - iv.epsHi) < 1e-9 * iv.epsHi) nearEdge = true;
            if (nearEdge) continue;
            EXPECT_EQ(r.kappa(eps), kappa_direct(f, kMax, eps)) << name << " eps=" << eps;
        }
    }
}

TEST(Properties, IntervalsVerified) {
    for (const char* name : {"F", "I", "C", "A", "B", "K"}) {
        const Family f = fam(name);
        const SweepResult r = run_sweep(f, 24, f.scenario == Scenario::Codim3 ? 0.5 : 0.2, threaded());
        int flagged = 0;
        for (const auto& iv : r.intervals) {
            if (!iv.valid()) continue;
            const Word w = family_word(f.X, iv.k, f.Y);
            EXPECT_TRUE(iv.verified) << name << " k=" << iv.k;
            EXPECT_FALSE(iv.multiInterval) << name << " k=" << iv.k;
            flagged += iv.detachedFromZero;
            if (iv.detachedFromZero) {
                // flag must be genuine: invalid at the floor, valid inside
                EXPECT_FALSE(valid_at(f, w, 1e-12)) << name << " k=" << iv.k;
                EXPECT_GT(iv.epsLo, 0.0);
                EXPECT_TRUE(valid_at(f, w, std::sqrt(iv.epsLo * iv.epsHi))) << name << " k=" << iv.k;
            } else {
                EXPECT_TRUE(valid_at(f, w, 0.5 * iv.epsHi)) << name << " k=" << iv.k;
            }
            EXPECT_FALSE(valid_at(f, w, 1.01 * iv.epsHi)) << name << " k=" << iv.k;
        }
        EXPECT_EQ(r.anomalies, flagged) << name;
        // only K has S[k] virtual at eps = 0 that become valid when perturbed, all below k = 11
        if (std::string(name) != "K") { EXPECT_EQ(flagged, 0) << name; }
        for (const auto& iv : r.intervals)
            if (iv.detachedFromZero) { EXPECT_LT(iv.k, 11) << name; }
    }
}

TEST(Properties, EpsHiMonotoneBeyondHead) {
    for (const char* name : {"F", "I", "C", "A", "B", "K"}) {
        const Family f = fam(name);
        const SweepResult r = run_sweep(f, 30, f.scenario == Scenario::Codim3 ? 0.5 : 0.2, threaded());
        std::vector<const KInterval*> valid;
        for (const auto& iv : r.intervals)
            if (iv.valid()) valid.push_back(&iv);
        for (std::size_t i = 4; i < valid.size(); ++i)
            EXPECT_LT(valid[i]->epsHi, valid[i - 1]->epsHi) << name << " k=" << valid[i]->k;
    }
}

TEST(Properties, DeterministicAcrossWorkers) {
    const Family f = fam("C");
    SweepOptions one;
    const SweepResult a = run_sweep(f, 20, 0.5, one);
    const SweepResult b = run_sweep(f, 20, 0.5, threaded());
    ASSERT_EQ(a.intervals.size(), b.intervals.size());
    for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        EXPECT_EQ(std::memcmp(&a.intervals[i].epsHi, &b.intervals[i].epsHi, sizeof(double)), 0);
        EXPECT_EQ(a.intervals[i].event, b.intervals[i].event);
        EXPECT_EQ(a.intervals[i].eventIndex, b.intervals[i].eventIndex);
    }
    EXPECT_EQ(a.epsK, b.epsK);
}

TEST(BoundCheck, ParamF) {
    const Family f = fam("F");
    const SweepResult r = run_sweep(f, 25, 0.5, threaded());
    const BoundReport b = bound_check(f, r, 10, 25);
    EXPECT_TRUE(b.pass());
    EXPECT_GT(b.lower, 0.0);
    EXPECT_LE(b.maxPhi, b.upper);
    EXPECT_NEAR(b.upper, 3.0 / 0.0907626, 1e-3);
}

TEST(BoundCheck, ParamAShortRange) {
    const Family f = fam("A");
    const SweepResult r = run_sweep(f, 40, 0.2, threaded());
    const BoundReport b = bound_check(f, r, 20, 40);
    EXPECT_TRUE(b.pass());
    EXPECT_NEAR(b.upper, 4.0 * M_PI * M_PI / (-1.0 + 3.0 * (std::sqrt(2.0) - 1.0)), 1e-9);
    for (const auto& [k, m] : b.virtualSamples) EXPECT_LT(m, 0.0) << k;
}

TEST(EventType, RoundTripNames) {
    for (EventType e : {EventType::BorderCollision, EventType::StabilityLoss, EventType::Singular,
                        EventType::EndOfRange, EventType::NeverValid})
        EXPECT_EQ(event_type_from_string(to_string(e)), e);
    EXPECT_FALSE(event_type_from_string("Bogus").has_value());
}
