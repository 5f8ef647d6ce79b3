#pragma once

// First-order dual numbers: a + b e with e^2 = 0.
// Propagating (value, 1) through a computation yields (f, f').

#include <cmath>
#include <ostream>

namespace bcnf {

template <typename T = double>
struct Dual {
    T val{};
    T eps{};

    constexpr Dual() = default;
    constexpr Dual(T v) : val(v), eps(0) {}  // NOLINT(google-explicit-constructor)
    constexpr Dual(T v, T d) : val(v), eps(d) {}

    static constexpr Dual variable(T v) { return {v, T(1)}; }

    constexpr Dual operator-() const { return {-val, -eps}; }

    constexpr Dual& operator+=(const Dual& o) { val += o.val; eps += o.eps; return *this; }
    constexpr Dual& operator-=(const Dual& o) { val -= o.val; eps -= o.eps; return *this; }
    constexpr Dual& operator*=(const Dual& o) {
        eps = eps * o.val + val * o.eps;
        val *= o.val;
        return *this;
    }
    constexpr Dual& operator/=(const Dual& o) {
        const T v = val / o.val;
        eps = (eps - v * o.eps) / o.val;
        val = v;
        return *this;
    }

    friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }

    friend constexpr bool operator==(const Dual& a, const Dual& b) { return a.val == b.val && a.eps == b.eps; }

    friend std::ostream& operator<<(std::ostream& os, const Dual& d) { return os << d.val << " + " << d.eps << "e"; }
};

template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
    using std::sqrt;
    const T s = sqrt(x.val);
    return {s, x.eps / (T(2) * s)};
}

template <typename T>
Dual<T> abs(const Dual<T>& x) {
    return x.val < T(0) ? -x : x;
}

template <typename T>
T value_of(const Dual<T>& x) { return x.val; }
inline double value_of(double x) { return x; }

}  // namespace bcnf
