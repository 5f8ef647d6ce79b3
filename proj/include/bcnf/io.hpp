#pragma once

// CSV, JSON and SVG emission plus the matching readers. Floating values are
// written with 17 significant digits so that a write/read cycle is exact.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "codim3.hpp"
#include "codim4.hpp"
#include "normal_form.hpp"
#include "params.hpp"
#include "certify.hpp"
#include "report.hpp"
#include "sweep.hpp"

namespace bcnf::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw FormatError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw FormatError("trailing characters in number: '" + s + "'");
    return v;
}

inline int parse_int(const std::string& s) {
    std::size_t pos = 0;
    int v;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw FormatError("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw FormatError("trailing characters in integer: '" + s + "'");
    return v;
}

/// JSON numbers cannot hold NaN or infinity; those map to null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline double num_from(const json& j) { return j.is_null() ? NAN : j.get<double>(); }

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline void expect_header(std::istream& is, const std::string& header) {
    std::string line;
    if (!std::getline(is, line) || line != header) throw FormatError("expected CSV header '" + header + "'");
}

/// Keys in `j` must come from `allowed`.
inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw FormatError(what + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw FormatError("unknown key '" + it.key() + "' in " + what);
}

// ----------------------------------------------------------------------------
// Params and directions

inline json to_json(const Params& p) {
    return {{"tauL", p.tauL}, {"deltaL", p.deltaL}, {"tauR", p.tauR}, {"deltaR", p.deltaR}, {"mu", p.mu}};
}

inline Params params_from_json(const json& j) {
    reject_unknown_keys(j, {"tauL", "deltaL", "tauR", "deltaR", "mu"}, "params");
    for (const char* k : {"tauL", "deltaL", "tauR", "deltaR"})
        if (!j.contains(k)) throw FormatError(std::string("params missing '") + k + "'");
    return make_params(j.at("tauL").get<double>(), j.at("deltaL").get<double>(), j.at("tauR").get<double>(),
                       j.at("deltaR").get<double>(), j.value("mu", 1.0));
}

inline json to_json(const Direction& d) { return {{"a", d.a}, {"b", d.b}, {"c", d.c}, {"d", d.d}}; }

inline Direction direction_from_json(const json& j) {
    reject_unknown_keys(j, {"a", "b", "c", "d"}, "direction");
    return {j.value("a", 0.0), j.value("b", 0.0), j.value("c", 0.0), j.value("d", 0.0)};
}

// ----------------------------------------------------------------------------
// Cycles

struct CycleRow {
    int i = 0;
    Symbol symbol = Symbol::L;
    double x = 0.0, y = 0.0, margin = 0.0;
    friend bool operator==(const CycleRow&, const CycleRow&) = default;
};

inline const char* kCycleHeader = "i,symbol,x,y,margin";

inline void write_cycle_csv(std::ostream& os, const Cycle& c) {
    os << kCycleHeader << '\n';
    for (std::size_t i = 0; i < c.size(); ++i)
        os << i << ',' << to_char(c.word[i]) << ',' << fmt(c.points[i].x) << ',' << fmt(c.points[i].y) << ','
           << fmt(c.margins[i]) << '\n';
}

inline std::vector<CycleRow> cycle_rows(const Cycle& c) {
    std::vector<CycleRow> out;
    for (std::size_t i = 0; i < c.size(); ++i)
        out.push_back({static_cast<int>(i), c.word[i], c.points[i].x, c.points[i].y, c.margins[i]});
    return out;
}

inline std::vector<CycleRow> read_cycle_csv(std::istream& is) {
    expect_header(is, kCycleHeader);
    std::vector<CycleRow> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5 || f[1].size() != 1) throw FormatError("bad cycle row: " + line);
        out.push_back({parse_int(f[0]), parse_word(f[1])[0], parse_double(f[2]), parse_double(f[3]),
                       parse_double(f[4])});
    }
    return out;
}

// ----------------------------------------------------------------------------
// Condition reports

inline json to_json(const ConditionList& c) {
    json arr = json::array();
    for (const auto& e : c.conditions)
        arr.push_back({{"name", e.name}, {"value", num(e.value)}, {"threshold", num(e.threshold)}, {"pass", e.pass}});
    return arr;
}

inline ConditionList conditions_from_json(const json& arr) {
    ConditionList c;
    for (const auto& e : arr) {
        reject_unknown_keys(e, {"name", "value", "threshold", "pass"}, "condition");
        c.add(e.at("name").get<std::string>(), num_from(e.at("value")), num_from(e.at("threshold")),
              e.at("pass").get<bool>());
    }
    return c;
}

inline json to_json(const Codim3Report& r) {
    json j{{"scenario", "codim3"}, {"pass", r.pass()}, {"tol", r.tol}, {"kRange", {r.kFirst, r.kLast}},
           {"conditions", to_json(r.conditions)}};
    return j;
}

inline json to_json(const Codim4Report& r) {
    json j{{"scenario", "codim4"}, {"pass", r.pass()}, {"tol", r.tol}, {"kRange", {r.kFirst, r.kLast}},
           {"conditions", to_json(r.conditions)}};
    if (r.frame) {
        const Codim4Frame& f = *r.frame;
        j["frame"] = {{"nu", f.nu},           {"omega12", f.omega12()}, {"rho1", f.rho1()},
                      {"rho2", f.rho2()},     {"gamma11", f.gamma11()}, {"gamma12", f.gamma12()},
                      {"gamma21", f.gamma21()}, {"gamma22", f.gamma22()}, {"sigma1", f.sigma1()},
                      {"sigma2", f.sigma2()}};
    }
    return j;
}

// ----------------------------------------------------------------------------
// Certificates and codim-4 candidates

inline json to_json(const Certificate& c) {
    json fails = json::array();
    for (const auto& f : c.failures) fails.push_back({{"k", f.k}, {"index", f.index}, {"what", f.what}});
    return {{"example", c.example},
            {"kMax", c.kMax},
            {"threshold", c.threshold},
            {"expectedThreshold", c.expectedThreshold},
            {"multipliers", c.multipliersOk ? c.multipliers : std::string("mismatch")},
            {"closedFormChecks", c.closedFormChecks ? "pass" : "fail"},
            {"floatAgreement", c.floatAgreement},
            {"floatMaxError", c.floatMaxError},
            {"pass", c.pass()},
            {"failures", fails}};
}

inline json to_json(const Codim4Candidate& c) {
    return {{"tauL", c.params.tauL},
            {"deltaL", c.params.deltaL},
            {"tauR", c.params.tauR},
            {"deltaR", c.params.deltaR},
            {"mu", c.params.mu},
            {"residuals",
             {{"gamma21", num(c.residualGamma21)},
              {"gamma22_plus_1", num(c.residualGamma22)},
              {"det_minus_1", num(c.residualDet)},
              {"trace_minus_2", num(c.residualTrace)}}},
            {"viable", c.probe.viable},
            {"allVirtual", c.probe.allVirtual},
            {"kFirst", c.probe.kFirst},
            {"kProbe", c.probe.kProbe},
            {"reportPass", c.reportPass}};
}

inline Codim4Candidate candidate_from_json(const json& j) {
    reject_unknown_keys(j, {"tauL", "deltaL", "tauR", "deltaR", "mu", "residuals", "viable", "allVirtual", "kFirst",
                            "kProbe", "reportPass"},
                        "candidate");
    Codim4Candidate c;
    c.params = {j.at("tauL").get<double>(), j.at("deltaL").get<double>(), j.at("tauR").get<double>(),
                j.at("deltaR").get<double>(), j.at("mu").get<double>()};
    const json& r = j.at("residuals");
    c.residualGamma21 = num_from(r.at("gamma21"));
    c.residualGamma22 = num_from(r.at("gamma22_plus_1"));
    c.residualDet = num_from(r.at("det_minus_1"));
    c.residualTrace = num_from(r.at("trace_minus_2"));
    c.probe.viable = j.at("viable").get<bool>();
    c.probe.allVirtual = j.at("allVirtual").get<bool>();
    c.probe.kFirst = j.at("kFirst").get<int>();
    c.probe.kProbe = j.at("kProbe").get<int>();
    c.reportPass = j.at("reportPass").get<bool>();
    return c;
}

// ----------------------------------------------------------------------------
// Sweeps

struct SweepRow {
    int k = 0;
    double epsHi = 0.0;
    EventType event = EventType::NeverValid;
    int eventIndex = -1;
    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

inline const char* kSweepHeader = "k,epsHi,eventType,eventIndex";
inline const char* kRatioHeader = "K,epsK,ratio";

inline std::vector<SweepRow> sweep_rows(const SweepResult& r) {
    std::vector<SweepRow> out;
    for (const auto& iv : r.intervals) out.push_back({iv.k, iv.epsHi, iv.event, iv.eventIndex});
    return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << kSweepHeader << '\n';
    for (const auto& iv : r.intervals)
        os << iv.k << ',' << fmt(iv.epsHi) << ',' << to_string(iv.event) << ',' << iv.eventIndex << '\n';
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& is) {
    expect_header(is, kSweepHeader);
    std::vector<SweepRow> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 4) throw FormatError("bad sweep row: " + line);
        const auto ev = event_type_from_string(f[2]);
        if (!ev) throw FormatError("unknown event type: " + f[2]);
        out.push_back({parse_int(f[0]), parse_double(f[1]), *ev, parse_int(f[3])});
    }
    return out;
}

inline void write_ratio_csv(std::ostream& os, const SweepResult& r) {
    os << kRatioHeader << '\n';
    for (const auto& row : r.ratios) os << row.K << ',' << fmt(row.epsK) << ',' << fmt(row.ratio) << '\n';
}

inline std::vector<RatioRow> read_ratio_csv(std::istream& is) {
    expect_header(is, kRatioHeader);
    std::vector<RatioRow> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw FormatError("bad ratio row: " + line);
        out.push_back({parse_int(f[0]), parse_double(f[1]), parse_double(f[2])});
    }
    return out;
}

inline json to_json(const KInterval& iv) {
    return {{"k", iv.k},
            {"epsLo", iv.epsLo},
            {"epsHi", iv.epsHi},
            {"event", to_string(iv.event)},
            {"eventIndex", iv.eventIndex},
            {"detachedFromZero", iv.detachedFromZero},
            {"multiInterval", iv.multiInterval},
            {"belowFloor", iv.belowFloor},
            {"verified", iv.verified}};
}

inline KInterval interval_from_json(const json& j) {
    KInterval iv;
    iv.k = j.at("k").get<int>();
    iv.epsLo = j.at("epsLo").get<double>();
    iv.epsHi = j.at("epsHi").get<double>();
    const auto ev = event_type_from_string(j.at("event").get<std::string>());
    if (!ev) throw FormatError("unknown event type");
    iv.event = *ev;
    iv.eventIndex = j.at("eventIndex").get<int>();
    iv.detachedFromZero = j.at("detachedFromZero").get<bool>();
    iv.multiInterval = j.at("multiInterval").get<bool>();
    iv.belowFloor = j.at("belowFloor").get<bool>();
    iv.verified = j.at("verified").get<bool>();
    return iv;
}

inline json to_json(const SweepResult& r) {
    json ivs = json::array(), ratios = json::array(), kappa = json::array();
    for (const auto& iv : r.intervals) ivs.push_back(to_json(iv));
    for (const auto& row : r.ratios) ratios.push_back({{"K", row.K}, {"epsK", row.epsK}, {"ratio", num(row.ratio)}});
    for (const auto& [eps, n] : r.kappaSamples) kappa.push_back({eps, n});
    return {{"scenario", r.scenario == Scenario::Codim3 ? "codim3" : "codim4"},
            {"epsStar", r.epsStar},
            {"ratioTarget", num(r.ratioTarget)},
            {"anomalies", r.anomalies},
            {"intervals", ivs},
            {"epsK", r.epsK},
            {"ratios", ratios},
            {"kappaSamples", kappa}};
}

inline SweepResult sweep_from_json(const json& j) {
    SweepResult r;
    r.scenario = j.at("scenario").get<std::string>() == "codim4" ? Scenario::Codim4 : Scenario::Codim3;
    r.epsStar = j.at("epsStar").get<double>();
    r.ratioTarget = num_from(j.at("ratioTarget"));
    r.anomalies = j.at("anomalies").get<int>();
    for (const auto& e : j.at("intervals")) r.intervals.push_back(interval_from_json(e));
    r.epsK = j.at("epsK").get<std::vector<double>>();
    for (const auto& e : j.at("ratios"))
        r.ratios.push_back({e.at("K").get<int>(), e.at("epsK").get<double>(), num_from(e.at("ratio"))});
    for (const auto& e : j.at("kappaSamples")) r.kappaSamples.emplace_back(e.at(0).get<double>(), e.at(1).get<int>());
    return r;
}

// ----------------------------------------------------------------------------
// SVG

namespace svg {

inline std::string header(double w, double h) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
}

}  // namespace svg

/// Horizontal segment per k on a log eps axis with the kappa staircase overlaid.
inline void write_interval_svg(std::ostream& os, const SweepResult& r) {
    const double W = 640, H = 420, left = 50, right = 20, top = 20, bottom = 40;
    double epsMin = r.epsStar;
    int kMax = 1;
    for (const auto& iv : r.intervals) {
        if (iv.valid()) epsMin = std::min(epsMin, iv.epsHi);
        kMax = std::max(kMax, iv.k);
    }
    const double l0 = std::log10(epsMin) - 0.5, l1 = std::log10(r.epsStar);
    auto X = [&](double eps) { return left + (W - left - right) * (std::log10(eps) - l0) / (l1 - l0); };
    auto Yk = [&](double k) { return H - bottom - (H - top - bottom) * k / (kMax + 1); };
    os << svg::header(W, H);
    os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" font-size=\"12\">log10 eps</text>\n";
    os << "<text x=\"8\" y=\"" << H / 2 << "\" font-size=\"12\">k</text>\n";
    for (const auto& iv : r.intervals) {
        if (!iv.valid()) continue;
        const double x0 = iv.epsLo > 0 ? X(std::max(iv.epsLo, std::pow(10.0, l0))) : left;
        os << "<line x1=\"" << x0 << "\" y1=\"" << Yk(iv.k) << "\" x2=\"" << X(iv.epsHi) << "\" y2=\"" << Yk(iv.k)
           << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"blue\" points=\"";
    for (const auto& [eps, n] : r.kappaSamples)
        if (eps >= std::pow(10.0, l0)) os << X(eps) << ',' << Yk(n) << ' ';
    os << "\"/>\n</svg>\n";
}

/// Scatter of cycle points with dashed lines through the origin along each direction.
inline void write_portrait_svg(std::ostream& os, const std::vector<Cycle>& cycles,
                               const std::vector<Vec2<double>>& directions) {
    const double W = 520, H = 520, pad = 20;
    double ext = 1.0;
    for (const auto& c : cycles)
        for (const auto& p : c.points) ext = std::max({ext, std::abs(p.x), std::abs(p.y)});
    ext *= 1.1;
    auto X = [&](double x) { return pad + (W - 2 * pad) * (x + ext) / (2 * ext); };
    auto Y = [&](double y) { return H - pad - (H - 2 * pad) * (y + ext) / (2 * ext); };
    os << svg::header(W, H);
    os << "<line x1=\"" << X(0) << "\" y1=\"" << Y(-ext) << "\" x2=\"" << X(0) << "\" y2=\"" << Y(ext)
       << "\" stroke=\"gray\"/>\n";
    for (const auto& d : directions) {
        const double n = std::hypot(d.x, d.y);
        if (n == 0) continue;
        const double s = 2 * ext / n;
        os << "<line x1=\"" << X(-s * d.x) << "\" y1=\"" << Y(-s * d.y) << "\" x2=\"" << X(s * d.x) << "\" y2=\""
           << Y(s * d.y) << "\" stroke=\"black\" stroke-dasharray=\"4,3\"/>\n";
    }
    static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t ci = 0; ci < cycles.size(); ++ci)
        for (const auto& p : cycles[ci].points)
            os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"2\" fill=\"" << colors[ci % 6]
               << "\"/>\n";
    os << "</svg>\n";
}

}  // namespace bcnf::io
