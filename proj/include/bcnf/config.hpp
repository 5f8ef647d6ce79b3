#pragma once

// Run configuration for the command-line tool: a JSON object whose fields are
// all optional, layered over an optional named preset.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "codim4.hpp"
#include "io.hpp"
#include "presets.hpp"

namespace bcnf {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<Params> params;
    std::optional<Direction> direction;
    std::optional<Word> X, Y;
    std::optional<Scenario> scenario;
    std::optional<double> tol;
    std::optional<double> epsStar;
    std::optional<int> kMax;
    std::optional<unsigned> workers;
    std::optional<double> mu;
    std::optional<Box> box;
    std::optional<int> grid;
    std::vector<int> k;
    std::optional<std::string> out;
};

inline Scenario scenario_from_string(const std::string& s) {
    if (s == "codim3") return Scenario::Codim3;
    if (s == "codim4") return Scenario::Codim4;
    throw ConfigError("unknown scenario '" + s + "'");
}

inline const char* to_string(Scenario s) { return s == Scenario::Codim3 ? "codim3" : "codim4"; }

/// "8..12", "3,5,9" or a mix such as "1..3,7".
inline std::vector<int> parse_k_list(const std::string& text) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) {
            const std::size_t dots = item.find("..");
            try {
                if (dots == std::string::npos) {
                    out.push_back(io::parse_int(item));
                } else {
                    const int a = io::parse_int(item.substr(0, dots)), b = io::parse_int(item.substr(dots + 2));
                    if (b < a) throw ConfigError("empty k range '" + item + "'");
                    for (int k = a; k <= b; ++k) out.push_back(k);
                }
            } catch (const io::FormatError& e) {
                throw ConfigError(e.what());
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (int k : out)
        if (k < 1) throw ConfigError("k must be positive");
    return out;
}

inline std::pair<double, double> range_from_json(const io::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be [lo, hi]");
    const double lo = j[0].get<double>(), hi = j[1].get<double>();
    if (!(lo < hi)) throw ConfigError(std::string(what) + " must satisfy lo < hi");
    return {lo, hi};
}

inline RunConfig config_from_json(const io::json& j) {
    try {
        io::reject_unknown_keys(j,
                                {"preset", "params", "direction", "X", "Y", "scenario", "tol", "epsStar", "kMax",
                                 "workers", "mu", "box", "grid", "k", "out"},
                                "config");
        RunConfig c;
        if (j.contains("preset")) c.preset = j["preset"].get<std::string>();
        if (j.contains("params")) c.params = io::params_from_json(j["params"]);
        if (j.contains("direction")) {
            const auto& d = j["direction"];
            if (d.is_string()) {
                c.direction = presets::find_direction(d.get<std::string>());
                if (!c.direction) throw ConfigError("unknown direction '" + d.get<std::string>() + "'");
            } else {
                c.direction = io::direction_from_json(d);
            }
        }
        if (j.contains("X")) c.X = parse_word(j["X"].get<std::string>());
        if (j.contains("Y")) c.Y = parse_word(j["Y"].get<std::string>());
        if (j.contains("scenario")) c.scenario = scenario_from_string(j["scenario"].get<std::string>());
        if (j.contains("tol")) c.tol = j["tol"].get<double>();
        if (j.contains("epsStar")) c.epsStar = j["epsStar"].get<double>();
        if (j.contains("kMax")) c.kMax = j["kMax"].get<int>();
        if (j.contains("workers")) c.workers = j["workers"].get<unsigned>();
        if (j.contains("mu")) c.mu = j["mu"].get<double>();
        if (j.contains("grid")) c.grid = j["grid"].get<int>();
        if (j.contains("out")) c.out = j["out"].get<std::string>();
        if (j.contains("box")) {
            const auto& b = j["box"];
            io::reject_unknown_keys(b, {"tauR", "deltaR"}, "box");
            Box box;
            if (b.contains("tauR")) std::tie(box.tauRMin, box.tauRMax) = range_from_json(b["tauR"], "box.tauR");
            if (b.contains("deltaR"))
                std::tie(box.deltaRMin, box.deltaRMax) = range_from_json(b["deltaR"], "box.deltaR");
            c.box = box;
        }
        if (j.contains("k")) {
            const auto& k = j["k"];
            c.k = k.is_string() ? parse_k_list(k.get<std::string>()) : k.get<std::vector<int>>();
        }
        return c;
    } catch (const io::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const io::FormatError& e) {
        throw ConfigError(e.what());
    } catch (const WordParseError& e) {
        throw ConfigError(e.what());
    }
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    io::json j;
    try {
        j = io::json::parse(in);
    } catch (const io::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

/// Fully resolved inputs: explicit fields override the preset.
struct ResolvedConfig {
    std::string name;
    Params params;
    std::optional<Direction> direction;
    Word X, Y;
    Scenario scenario = Scenario::Codim3;
    double tol = 1e-6;
    double epsStar = 0.5;
};

inline ResolvedConfig resolve(const RunConfig& c) {
    ResolvedConfig r;
    if (c.preset) {
        const auto p = presets::find(*c.preset);
        if (!p) throw ConfigError("unknown preset '" + *c.preset + "'");
        r = {p->name, p->params, p->direction, p->X, p->Y, p->scenario, p->tol, p->epsStar};
    } else {
        r.name = "custom";
        if (!c.params) throw ConfigError("either a preset or params is required");
        if (!c.X || !c.Y) throw ConfigError("words X and Y are required without a preset");
    }
    if (c.params) r.params = *c.params;
    if (c.direction) r.direction = c.direction;
    if (c.X) r.X = *c.X;
    if (c.Y) r.Y = *c.Y;
    if (c.scenario) r.scenario = *c.scenario;
    if (c.tol) r.tol = *c.tol;
    if (c.epsStar) r.epsStar = *c.epsStar;
    if (c.mu) r.params.mu = *c.mu;
    if (r.params.mu == 0.0) throw ConfigError("mu must be nonzero");
    return r;
}

}  // namespace bcnf
