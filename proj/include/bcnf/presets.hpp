#pragma once

// Named parameter points and perturbation directions.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "params.hpp"
#include "quadfield.hpp"
#include "word.hpp"

namespace bcnf::presets {

struct Preset {
    std::string name;
    Params params;
    Word X;
    Word Y;
    Scenario scenario;
    double tol;  // equality tolerance for the condition report
    std::optional<Direction> direction;
    double epsStar;
};

inline constexpr Direction abcdFIC{0.0, 1.0, 0.0, 0.0};
inline constexpr Direction abcdA{1.0, -1.0, 0.0, 0.0};
inline constexpr Direction abcdB{0.0, -1.0, 0.0, -1.0};
inline constexpr Direction abcdK{-2.0, -1.0, -4.0, 0.0};

/// Root of tau^4 - tau^3 - 3 tau^2 + 2 near 0.7952, polished by Newton.
inline double tauR_B() {
    double t = 0.7952;
    for (int i = 0; i < 50; ++i) {
        const double f = ((t - 1.0) * t - 3.0) * t * t + 2.0;
        const double df = ((4.0 * t - 3.0) * t - 6.0) * t;
        const double step = f / df;
        t -= step;
        if (std::abs(step) < 1e-17) break;
    }
    return t;
}

inline Params paramF() { return {-55.0 / 117.0, 4.0 / 9.0, -5.0 / 2.0, 3.0 / 2.0, 1.0}; }

inline Params paramI() {
    const double dR = 1.378851759;
    return {0.5, 1.0 / dR, -1.139755486, dR, 1.0};
}

inline Params paramC() {
    const double dR = 1.659870677;
    return {-0.7, std::pow(dR, -1.5), -3.308423793, dR, 1.0};
}

inline Params paramSi10() {
    return {34.0 / 25.0 * std::cos(19.0 * M_PI / 25.0), 0.4624, 2.5 * std::cos(27.0 * M_PI / 50.0), 1.5625, 1.0};
}

inline QuadParams paramA_exact() {
    return {Quad(0, -1, 2), Quad(1), Quad(1, -1, 2), Quad(1), Quad(1)};
}

inline QuadParams paramK_exact() {
    return {Quad(2), Quad(1), Quad(Rational(1, 2), Rational(1, 2), 5), Quad(1), Quad(1)};
}

inline Params paramA() { return to_double(paramA_exact()); }
inline Params paramK() { return to_double(paramK_exact()); }

inline Params paramB() {
    const double t = tauR_B();
    return {2.0 * t / (t * t - 2.0), 1.0, t, 1.0, 1.0};
}

inline std::vector<Preset> all() {
    return {
        {"F", paramF(), "RLR"_w, "LR"_w, Scenario::Codim3, 1e-9, abcdFIC, 0.5},
        {"I", paramI(), "RLLR"_w, "LLR"_w, Scenario::Codim3, 1e-6, abcdFIC, 0.5},
        {"C", paramC(), "RLRLR"_w, "LR"_w, Scenario::Codim3, 1e-6, abcdFIC, 0.5},
        {"Si10", paramSi10(), "RRL"_w, "LRLL"_w, Scenario::Codim4, 1e-6, std::nullopt, 0.2},
        {"A", paramA(), "RRL"_w, "LRLL"_w, Scenario::Codim4, 1e-9, abcdA, 0.2},
        {"B", paramB(), "RRRL"_w, "LRRLL"_w, Scenario::Codim4, 1e-6, abcdB, 0.2},
        {"K", paramK(), "L"_w, "RRRRR"_w, Scenario::Codim4, 1e-9, abcdK, 0.2},
    };
}

/// Lookup by name; accepts "F" as well as "paramF".
inline std::optional<Preset> find(std::string_view name) {
    if (name.substr(0, 5) == "param") name.remove_prefix(5);
    for (auto& p : all())
        if (p.name == name) return p;
    return std::nullopt;
}

inline std::optional<Direction> find_direction(std::string_view name) {
    if (name.substr(0, 4) == "abcd") name.remove_prefix(4);
    if (name == "FIC") return abcdFIC;
    if (name == "A") return abcdA;
    if (name == "B") return abcdB;
    if (name == "K") return abcdK;
    return std::nullopt;
}

inline Family family(const Preset& p) {
    if (!p.direction) throw std::invalid_argument("preset " + p.name + " has no perturbation direction");
    return {p.params, *p.direction, p.X, p.Y, p.scenario};
}

}  // namespace bcnf::presets
