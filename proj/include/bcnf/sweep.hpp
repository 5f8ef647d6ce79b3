#pragma once

// Sweeps in the perturbation parameter eps: per-k intervals on which the
// S[k]-cycle is admissible and attracting, the count kappa(eps), the
// thresholds eps_K and the ratio tables for the two scaling laws.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "codim3.hpp"
#include "codim4.hpp"
#include "normal_form.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "report.hpp"

namespace bcnf {

enum class EventType { BorderCollision, StabilityLoss, Singular, EndOfRange, NeverValid };

inline const char* to_string(EventType e) {
    switch (e) {
        case EventType::BorderCollision: return "BorderCollision";
        case EventType::StabilityLoss: return "StabilityLoss";
        case EventType::Singular: return "Singular";
        case EventType::EndOfRange: return "EndOfRange";
        case EventType::NeverValid: return "NeverValid";
    }
    return "?";
}

inline std::optional<EventType> event_type_from_string(const std::string& s) {
    for (EventType e : {EventType::BorderCollision, EventType::StabilityLoss, EventType::Singular,
                        EventType::EndOfRange, EventType::NeverValid})
        if (s == to_string(e)) return e;
    return std::nullopt;
}

struct KInterval {
    int k = 0;
    double epsLo = 0.0;
    double epsHi = 0.0;  // 0 when never admissible and attracting
    EventType event = EventType::NeverValid;
    int eventIndex = -1;     // cycle point index for BorderCollision, StabilityCondition for StabilityLoss
    bool detachedFromZero = false;  // valid set starts above the grid floor
    bool multiInterval = false;     // valid again somewhere above epsHi on the grid
    bool verified = false;          // interior re-check and 1.01 epsHi check both passed
    bool belowFloor = false;        // NeverValid on the grid although valid at eps = 0

    bool valid() const { return epsHi > 0.0; }
    bool contains(double eps) const { return eps > epsLo && eps < epsHi; }
};

struct SweepOptions {
    double floor = 1e-12;
    int pointsPerDecade = 64;
    int bisectionSteps = 40;
    unsigned workers = 1;
    int verifyPoints = 8;
};

/// Outcome of classifying the S[k]-cycle at one eps.
struct PointStatus {
    bool valid = false;
    bool singular = false;
    double margin = NAN;
    StabilityMargins stability{NAN, NAN, NAN};
    std::size_t marginIndex = 0;
    double onManifoldTol = 0.0;
};

inline PointStatus classify_at(const Family& fam, const Word& w, double eps) {
    PointStatus s;
    try {
        const Cycle c = solve_cycle(family_params(fam, eps), w);
        s.margin = margin(c);
        s.marginIndex = margin_index(c);
        s.onManifoldTol = c.on_manifold_tolerance();
        s.stability = stability_margins(c.detM, c.traceM);
        s.valid = c.stability == Stability::Attracting && s.margin > s.onManifoldTol;
    } catch (const UnitEigenvalueError&) {
        s.singular = true;
    }
    return s;
}

inline bool valid_at(const Family& fam, const Word& w, double eps) { return classify_at(fam, w, eps).valid; }

/// Geometric grid on [floor, epsStar] with epsStar as the last point.
inline std::vector<double> sweep_grid(double epsStar, const SweepOptions& opt = {}) {
    if (!(epsStar > 0.0)) throw std::invalid_argument("epsStar must be positive");
    std::vector<double> g;
    const double lf = std::log10(opt.floor), ls = std::log10(epsStar);
    const int n = std::max(1, static_cast<int>(std::ceil((ls - lf) * opt.pointsPerDecade)));
    for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, lf + (ls - lf) * i / n));
    g.push_back(epsStar);
    return g;
}

namespace detail {

/// Fixed-step bisection between a valid and an invalid eps; returns (valid end, invalid end).
inline std::pair<double, double> bisect(const Family& fam, const Word& w, double good, double bad, int steps) {
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (good + bad);
        if (valid_at(fam, w, mid)) good = mid;
        else bad = mid;
    }
    return {good, bad};
}

}  // namespace detail

/// Verification grid: interior points of (epsLo, epsHi) must be valid and 1.01 epsHi not.
inline bool verify_interval(const Family& fam, const KInterval& iv, int points = 8) {
    if (!iv.valid()) return true;
    const Word w = family_word(fam.X, iv.k, fam.Y);
    const double lo = std::max(iv.epsLo, iv.epsHi * 1e-6);
    for (int i = 1; i <= points; ++i) {
        // geometric interior points, kept away from the endpoints
        const double t = static_cast<double>(i) / (points + 1);
        const double eps = lo * std::pow(iv.epsHi / lo, t);
        if (!valid_at(fam, w, eps)) return false;
    }
    if (iv.event == EventType::EndOfRange) return true;
    return !valid_at(fam, w, 1.01 * iv.epsHi);
}

inline KInterval k_interval(const Family& fam, int k, double epsStar, const SweepOptions& opt = {}) {
    const Word w = family_word(fam.X, k, fam.Y);
    const std::vector<double> grid = sweep_grid(epsStar, opt);
    std::vector<char> ok(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ok[i] = valid_at(fam, w, grid[i]);

    KInterval iv;
    iv.k = k;
    const auto first = std::find(ok.begin(), ok.end(), 1);
    if (first == ok.end()) {
        iv.event = EventType::NeverValid;
        iv.verified = true;
        iv.belowFloor = valid_at(fam, w, 0.0);
        return iv;
    }
    const std::size_t i0 = static_cast<std::size_t>(first - ok.begin());
    if (i0 > 0) {
        iv.detachedFromZero = true;
        iv.epsLo = detail::bisect(fam, w, grid[i0], grid[i0 - 1], opt.bisectionSteps).first;
    }
    std::size_t i1 = i0;
    while (i1 < grid.size() && ok[i1]) ++i1;
    if (i1 == grid.size()) {
        iv.epsHi = epsStar;
        iv.event = EventType::EndOfRange;
    } else {
        const auto [good, bad] = detail::bisect(fam, w, grid[i1 - 1], grid[i1], opt.bisectionSteps);
        iv.epsHi = good;
        const PointStatus at = classify_at(fam, w, bad);
        if (at.singular) {
            iv.event = EventType::Singular;
        } else if (!(at.margin > at.onManifoldTol)) {
            iv.event = EventType::BorderCollision;
            iv.eventIndex = static_cast<int>(at.marginIndex);
        } else {
            iv.event = EventType::StabilityLoss;
            iv.eventIndex = static_cast<int>(at.stability.binding());
        }
        iv.multiInterval = std::find(ok.begin() + static_cast<std::ptrdiff_t>(i1), ok.end(), 1) != ok.end();
    }
    iv.verified = verify_interval(fam, iv, opt.verifyPoints);
    return iv;
}

struct RatioRow {
    int K = 0;
    double epsK = 0.0;
    double ratio = NAN;  // eps_{K+1}/eps_K (codim-3) or eps_{2K}/eps_K (codim-4)
};

struct SweepResult {
    Scenario scenario = Scenario::Codim3;
    double epsStar = 0.0;
    std::vector<KInterval> intervals;  // k = 1..kMax
    std::vector<double> epsK;          // epsK[K-1] = eps_K
    std::vector<RatioRow> ratios;
    double ratioTarget = NAN;          // 1/lambda2(0) or 1/4
    std::vector<std::pair<double, int>> kappaSamples;
    int anomalies = 0;                 // intervals detached from zero, multi-interval or unverified

    int kappa(double eps) const {
        int n = 0;
        for (const auto& iv : intervals) n += iv.contains(eps);
        return n;
    }
};

/// kappa by classifying every k <= kMax at eps directly.
inline int kappa_direct(const Family& fam, int kMax, double eps) {
    int n = 0;
    for (int k = 1; k <= kMax; ++k) n += valid_at(fam, family_word(fam.X, k, fam.Y), eps);
    return n;
}

/// 1/lambda2(0) for a codimension-3 family, 1/4 for codimension-4.
inline double ratio_target(const Family& fam) {
    if (fam.scenario == Scenario::Codim4) return 0.25;
    return 1.0 / eigen_basis(fam.base, fam.X).lambda2;
}

inline SweepResult run_sweep(const Family& fam, int kMax, double epsStar, const SweepOptions& opt = {}) {
    if (kMax < 1) throw std::invalid_argument("kMax must be at least 1");
    SweepResult r;
    r.scenario = fam.scenario;
    r.epsStar = epsStar;
    r.intervals.resize(kMax);
    parallel_for(static_cast<std::size_t>(kMax), opt.workers, [&](std::size_t i) {
        r.intervals[i] = k_interval(fam, static_cast<int>(i) + 1, epsStar, opt);
    });
    for (const auto& iv : r.intervals) {
        if (iv.valid()) r.epsK.push_back(iv.epsHi);
        r.anomalies += iv.detachedFromZero || iv.multiInterval || !iv.verified;
    }
    std::sort(r.epsK.begin(), r.epsK.end(), std::greater<>());

    try {
        r.ratioTarget = ratio_target(fam);
    } catch (const std::exception&) {
        r.ratioTarget = NAN;
    }
    const int n = static_cast<int>(r.epsK.size());
    for (int K = 1; K <= n; ++K) {
        RatioRow row{K, r.epsK[K - 1], NAN};
        const int other = fam.scenario == Scenario::Codim4 ? 2 * K : K + 1;
        if (other <= n) row.ratio = r.epsK[other - 1] / r.epsK[K - 1];
        r.ratios.push_back(row);
    }

    SweepOptions kopt = opt;
    kopt.pointsPerDecade = 16;
    for (double eps : sweep_grid(epsStar, kopt)) r.kappaSamples.emplace_back(eps, r.kappa(eps));
    return r;
}

// ----------------------------------------------------------------------------
// Bounds

struct BoundReport {
    Scenario scenario = Scenario::Codim3;
    double upper = NAN;                        // 3/|gamma22'(0)| or 4 pi^2/(alpha - beta)
    std::vector<std::pair<int, double>> phi;   // (k, scaled epsHi)
    double lower = NAN;                        // min phi over the range
    double maxPhi = NAN;
    std::vector<std::pair<int, double>> virtualSamples;  // (k, margin) at 1.05 times the bound
    ConditionList conditions;

    bool pass() const { return conditions.all_pass(); }
};

/// codim-3: phi(k) = epsHi(k) lambda2(0)^k; codim-4: phi(k) = epsHi(k) k^2. Both
/// must lie in (0, upper]. For codim-4 the S[k]-cycle is also sampled at
/// eps = 1.05 upper / k^2 and must be virtual.
inline BoundReport bound_check(const Family& fam, const SweepResult& sweep, int kLo, int kHi) {
    BoundReport b;
    b.scenario = fam.scenario;
    double lambda2 = NAN;
    if (fam.scenario == Scenario::Codim3) {
        lambda2 = eigen_basis(fam.base, fam.X).lambda2;
        b.upper = 3.0 / std::abs(gamma22_prime(fam, fam.X, fam.Y));
    } else {
        b.upper = codim4_bound_constant(alpha_beta(fam, fam.X));
    }
    double lo = INFINITY, hi = 0.0;
    bool allPositive = true;
    for (int k = kLo; k <= kHi && k <= static_cast<int>(sweep.intervals.size()); ++k) {
        const KInterval& iv = sweep.intervals[k - 1];
        const double phi = fam.scenario == Scenario::Codim3 ? iv.epsHi * std::pow(lambda2, k)
                                                            : iv.epsHi * static_cast<double>(k) * k;
        b.phi.emplace_back(k, phi);
        allPositive = allPositive && phi > 0.0;
        lo = std::min(lo, phi);
        hi = std::max(hi, phi);
    }
    b.lower = lo;
    b.maxPhi = hi;
    b.conditions.add("phi_positive", lo, 0.0, !b.phi.empty() && allPositive);
    b.conditions.add("phi_below_upper_bound", hi, b.upper, !b.phi.empty() && hi <= b.upper);

    if (fam.scenario == Scenario::Codim4) {
        double worst = -INFINITY;
        for (int k = kLo; k <= kHi; ++k) {
            const double eps = 1.05 * b.upper / (static_cast<double>(k) * k);
            const PointStatus s = classify_at(fam, family_word(fam.X, k, fam.Y), eps);
            const double m = s.singular ? INFINITY : s.margin;
            b.virtualSamples.emplace_back(k, m);
            worst = std::max(worst, m);
        }
        b.conditions.add("virtual_beyond_bound", worst, 0.0, !b.virtualSamples.empty() && worst < 0.0);
    }
    return b;
}

}  // namespace bcnf
