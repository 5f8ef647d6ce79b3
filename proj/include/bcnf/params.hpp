#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "word.hpp"

namespace bcnf {

/// Traces and determinants of the two half-map matrices plus the border offset mu.
template <typename T = double>
struct BasicParams {
    T tauL{};
    T deltaL{};
    T tauR{};
    T deltaR{};
    T mu{1};

    T tau(Symbol s) const { return s == Symbol::L ? tauL : tauR; }
    T delta(Symbol s) const { return s == Symbol::L ? deltaL : deltaR; }

    friend bool operator==(const BasicParams&, const BasicParams&) = default;
};

using Params = BasicParams<double>;

inline Params make_params(double tauL, double deltaL, double tauR, double deltaR, double mu = 1.0) {
    if (mu == 0.0) throw std::invalid_argument("mu must be nonzero");
    return {tauL, deltaL, tauR, deltaR, mu};
}

/// Linear direction (a, b, c, d) in (tauL, deltaL, tauR, deltaR) space.
struct Direction {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    bool is_zero() const { return a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0; }
    friend bool operator==(const Direction&, const Direction&) = default;
};

enum class Scenario { Codim3, Codim4 };

/// One-parameter family through a high-codimension point together with the
/// itinerary pair (X, Y) whose X^k Y cycles are being tracked.
struct Family {
    Params base;
    Direction direction;
    Word X;
    Word Y;
    Scenario scenario = Scenario::Codim3;
};

/// Componentwise affine evaluation: base + eps * direction. mu is held fixed.
template <typename T>
BasicParams<T> family_params(const Family& fam, const T& eps) {
    const Params& p = fam.base;
    const Direction& v = fam.direction;
    return {T(p.tauL) + T(v.a) * eps, T(p.deltaL) + T(v.b) * eps, T(p.tauR) + T(v.c) * eps,
            T(p.deltaR) + T(v.d) * eps, T(p.mu)};
}

inline Params family_params(const Family& fam, double eps) { return family_params<double>(fam, eps); }

}  // namespace bcnf
