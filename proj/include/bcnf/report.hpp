#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace bcnf {

/// A single named check: `value` compared against `threshold`.
struct Condition {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ConditionList {
    std::vector<Condition> conditions;

    void add(std::string name, double value, double threshold, bool pass) {
        conditions.push_back({std::move(name), value, threshold, pass});
    }
    /// |value| <= tol
    void add_zero(std::string name, double value, double tol) {
        add(std::move(name), value, tol, std::abs(value) <= tol);
    }
    /// |value| > tol
    void add_nonzero(std::string name, double value, double tol) {
        add(std::move(name), value, tol, std::abs(value) > tol);
    }
    void add_flag(std::string name, bool ok) { add(std::move(name), ok ? 1.0 : 0.0, 1.0, ok); }

    bool all_pass() const {
        return !conditions.empty() &&
               std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.pass; });
    }
    const Condition* find(const std::string& name) const {
        for (const auto& c : conditions)
            if (c.name == name) return &c;
        return nullptr;
    }
};

}  // namespace bcnf
