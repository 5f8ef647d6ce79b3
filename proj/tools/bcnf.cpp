// bcnf: verification, codim-4 point search, condition reports, eps sweeps and
// portrait data for the two-dimensional border-collision normal form.
//
// Exit codes: 0 pass, 1 check failure, 2 invalid input.

#include <CLI11.hpp>

#include <bcnf/codim3.hpp>
#include <bcnf/codim4.hpp>
#include <bcnf/config.hpp>
#include <bcnf/io.hpp>
#include <bcnf/certify.hpp>
#include <bcnf/sweep.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

namespace fs = std::filesystem;
using namespace bcnf;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;

struct Flags {
    std::string config;
    std::string out;
    std::string preset;
    std::string kList;
    int kMax = 0;
    double epsStar = 0.0;
    double tol = 0.0;
    unsigned workers = 0;
    bool svg = true;
};

RunConfig merged_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (!f.preset.empty()) c.preset = f.preset;
    if (f.kMax > 0) c.kMax = f.kMax;
    if (f.epsStar > 0.0) c.epsStar = f.epsStar;
    if (f.tol > 0.0) c.tol = f.tol;
    if (f.workers > 0) c.workers = f.workers;
    if (!f.out.empty()) c.out = f.out;
    if (!f.kList.empty()) c.k = parse_k_list(f.kList);
    return c;
}

std::optional<fs::path> out_dir(const RunConfig& c) {
    if (!c.out) return std::nullopt;
    fs::path p(*c.out);
    fs::create_directories(p);
    return p;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

void print_conditions(const ConditionList& c) {
    for (const auto& e : c.conditions)
        std::printf("  %-36s %-4s value=%-24s threshold=%s\n", e.name.c_str(), e.pass ? "ok" : "FAIL",
                    io::fmt(e.value).c_str(), io::fmt(e.threshold).c_str());
}

int cmd_verify(const std::string& example, const Flags& f) {
    Example e;
    if (example == "A") e = Example::A;
    else if (example == "B") e = Example::B;
    else if (example == "K") e = Example::K;
    else {
        std::cerr << "unknown example '" << example << "' (expected A, B or K)\n";
        return kExitBadInput;
    }
    const RunConfig c = merged_config(f);
    const int kMax = c.kMax.value_or(200);
    const int expected = e == Example::A ? 8 : (e == Example::K ? 11 : 4);
    if (kMax < expected + 10) {
        std::cerr << "--kmax must be at least " << expected + 10 << "\n";
        return kExitBadInput;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate cert = verify_example(e, kMax);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const io::json j = io::to_json(cert);
    std::cout << j.dump(2) << "\n";
    std::printf("%s: threshold %d (expected %d), %.2f s\n", cert.pass() ? "PASS" : "FAIL", cert.threshold,
                cert.expectedThreshold, secs);
    if (auto dir = out_dir(c)) open_out(*dir / ("certificate_" + example + ".json")) << j.dump(2) << "\n";
    return cert.pass() ? kExitPass : kExitFail;
}

int cmd_find_codim4(const Flags& f) {
    const RunConfig c = merged_config(f);
    Word X, Y;
    double mu = 1.0;
    if (c.preset) {
        const auto p = presets::find(*c.preset);
        if (!p) throw ConfigError("unknown preset '" + *c.preset + "'");
        X = p->X;
        Y = p->Y;
        mu = p->params.mu;
    }
    if (c.X) X = *c.X;
    if (c.Y) Y = *c.Y;
    if (c.mu) mu = *c.mu;
    if (X.empty() || Y.empty()) throw ConfigError("find-codim4 needs words X and Y");
    if (mu == 0.0) throw ConfigError("mu must be nonzero");

    FindCodim4Options opt;
    if (c.grid) opt.grid = *c.grid;
    if (c.tol) opt.checkTol = *c.tol;
    opt.workers = c.workers.value_or(1);
    if (opt.grid < 2) throw ConfigError("grid must be at least 2");
    const Box box = c.box.value_or(Box{});

    std::vector<Codim4Candidate> roots;
    try {
        roots = find_codim4(X, Y, mu, box, opt);
    } catch (const ConstraintError& e) {
        throw ConfigError(e.what());
    }
    io::json arr = io::json::array();
    for (const auto& r : roots) arr.push_back(io::to_json(r));
    std::cout << arr.dump(2) << "\n";
    for (const auto& r : roots)
        std::printf("root tauR=%.12f deltaR=%.12f tauL=%.10f deltaL=%.10f  %s\n", r.params.tauR, r.params.deltaR,
                    r.params.tauL, r.params.deltaL,
                    r.probe.viable ? ("viable from k=" + std::to_string(r.probe.kFirst)).c_str()
                                   : (r.probe.allVirtual ? "all-virtual" : "not viable"));
    if (auto dir = out_dir(c)) open_out(*dir / "codim4_candidates.json") << arr.dump(2) << "\n";
    std::printf("%zu root(s)\n", roots.size());
    return roots.empty() ? kExitFail : kExitPass;
}

int cmd_check(const std::string& point, const Flags& f) {
    Scenario s;
    try {
        s = scenario_from_string(point);
    } catch (const ConfigError&) {
        std::cerr << "unknown point type '" << point << "' (expected codim3 or codim4)\n";
        return kExitBadInput;
    }
    const ResolvedConfig r = resolve(merged_config(f));
    io::json j;
    bool pass = false;
    if (s == Scenario::Codim3) {
        Codim3CheckOptions opt;
        opt.direction = r.direction;
        const Codim3Report rep = check_codim3(r.params, r.X, r.Y, r.tol, opt);
        j = io::to_json(rep);
        pass = rep.pass();
        print_conditions(rep.conditions);
    } else {
        const Codim4Report rep = check_codim4(r.params, r.X, r.Y, r.tol);
        j = io::to_json(rep);
        pass = rep.pass();
        print_conditions(rep.conditions);
    }
    std::printf("%s %s at %s (tol %g)\n", pass ? "PASS" : "FAIL", point.c_str(), r.name.c_str(), r.tol);
    if (auto dir = out_dir(merged_config(f))) open_out(*dir / ("check_" + point + ".json")) << j.dump(2) << "\n";
    return pass ? kExitPass : kExitFail;
}

int cmd_sweep(const Flags& f) {
    const RunConfig c = merged_config(f);
    const ResolvedConfig r = resolve(c);
    if (!r.direction) throw ConfigError("sweep needs a perturbation direction");
    const Family fam{r.params, *r.direction, r.X, r.Y, r.scenario};
    const int kMax = c.kMax.value_or(60);
    if (kMax < 2) throw ConfigError("--kmax must be at least 2");
    if (!(r.epsStar > 0.0)) throw ConfigError("eps-star must be positive");

    // eps = 0 diagnostic for the tagged scenario
    bool basePass;
    if (r.scenario == Scenario::Codim3) {
        Codim3CheckOptions opt;
        opt.direction = r.direction;
        const auto rep = check_codim3(r.params, r.X, r.Y, r.tol, opt);
        basePass = rep.pass();
        if (!basePass) print_conditions(rep.conditions);
    } else {
        const auto rep = check_codim4(r.params, r.X, r.Y, r.tol);
        basePass = rep.pass();
        if (!basePass) print_conditions(rep.conditions);
    }
    if (!basePass) {
        std::printf("FAIL eps = 0 %s diagnostic at %s\n", to_string(r.scenario), r.name.c_str());
        return kExitFail;
    }

    SweepOptions opt;
    opt.workers = c.workers.value_or(std::max(1u, std::thread::hardware_concurrency()));
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult res = run_sweep(fam, kMax, r.epsStar, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::printf("%s sweep at %s, kMax %d, epsStar %g, %.2f s\n", to_string(r.scenario), r.name.c_str(), kMax,
                r.epsStar, secs);
    std::printf("target ratio %.10g\n%6s %24s %14s\n", res.ratioTarget, "K", "eps_K", "ratio");
    for (const auto& row : res.ratios) std::printf("%6d %24.17g %14.8f\n", row.K, row.epsK, row.ratio);
    if (res.anomalies > 0) std::printf("%d interval anomaly(ies); see sweep.json\n", res.anomalies);

    if (auto dir = out_dir(c)) {
        auto os = open_out(*dir / "sweep.csv");
        io::write_sweep_csv(os, res);
        auto rs = open_out(*dir / "ratios.csv");
        io::write_ratio_csv(rs, res);
        open_out(*dir / "sweep.json") << io::to_json(res).dump(2) << "\n";
        auto sv = open_out(*dir / "intervals.svg");
        io::write_interval_svg(sv, res);
    }
    return kExitPass;
}

int cmd_portrait(const Flags& f) {
    const RunConfig c = merged_config(f);
    const ResolvedConfig r = resolve(c);
    if (c.k.empty()) throw ConfigError("portrait needs a nonempty k list (--k 8..12)");

    std::vector<Cycle> cycles;
    std::vector<int> ks;
    for (int k : c.k) {
        try {
            cycles.push_back(solve_cycle(r.params, family_word(r.X, k, r.Y)));
            ks.push_back(k);
        } catch (const UnitEigenvalueError& e) {
            std::fprintf(stderr, "k=%d: %s\n", k, e.what());
        }
    }
    std::vector<Vec2<double>> lines;
    try {
        const Codim4Frame fr = frame(r.params, r.X, r.Y, r.tol);
        lines = eigenline_directions(truncation_coeffs(r.params, r.X, fr), fr.nu);
    } catch (const std::exception&) {
        // eigenlines exist only where M_X has a repeated unit eigenvalue
    }

    std::ostringstream pts;
    pts << "k,i,symbol,x,y,margin\n";
    for (std::size_t n = 0; n < cycles.size(); ++n)
        for (std::size_t i = 0; i < cycles[n].size(); ++i)
            pts << ks[n] << ',' << i << ',' << to_char(cycles[n].word[i]) << ',' << io::fmt(cycles[n].points[i].x)
                << ',' << io::fmt(cycles[n].points[i].y) << ',' << io::fmt(cycles[n].margins[i]) << '\n';
    std::ostringstream eig;
    eig << "m,symbol,dx,dy\n";
    for (std::size_t m = 0; m < lines.size(); ++m)
        eig << m << ',' << to_char(r.X[m]) << ',' << io::fmt(lines[m].x) << ',' << io::fmt(lines[m].y) << '\n';

    if (auto dir = out_dir(c)) {
        open_out(*dir / "portrait.csv") << pts.str();
        open_out(*dir / "eigenlines.csv") << eig.str();
        if (f.svg) {
            auto sv = open_out(*dir / "portrait.svg");
            io::write_portrait_svg(sv, cycles, lines);
        }
    } else {
        std::cout << pts.str() << "\n" << eig.str();
    }
    std::printf("%zu of %zu cycle(s) solved, %zu eigenline(s)\n", cycles.size(), c.k.size(), lines.size());
    return cycles.empty() ? kExitFail : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic solutions of the border-collision normal form"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", f.out, "output directory");
        sub->add_option("--preset", f.preset, "named parameter set: F I C Si10 A B K");
        sub->add_option("--tol", f.tol, "equality tolerance override")->check(CLI::PositiveNumber);
    };

    std::string example, point;
    auto* verify = app.add_subcommand("verify", "certify the admissibility threshold at A, B or K");
    verify->add_option("example", example, "A, B or K")->required();
    verify->add_option("--kmax", f.kMax, "largest k to certify")->check(CLI::PositiveNumber);
    verify->add_option("--out", f.out, "output directory");

    auto* find = app.add_subcommand("find-codim4", "search for repeated unit eigenvalue points");
    common(find);
    find->add_option("--workers", f.workers, "grid scan threads");

    auto* check = app.add_subcommand("check", "evaluate codim3 or codim4 conditions");
    check->add_option("point", point, "codim3 or codim4")->required();
    common(check);

    auto* sweep = app.add_subcommand("sweep", "admissible and attracting eps intervals per k");
    common(sweep);
    sweep->add_option("--kmax", f.kMax, "largest k")->check(CLI::PositiveNumber);
    sweep->add_option("--eps-star", f.epsStar, "upper end of the eps range")->check(CLI::PositiveNumber);
    sweep->add_option("--workers", f.workers, "worker threads");

    auto* portrait = app.add_subcommand("portrait", "cycle points and eigenlines");
    common(portrait);
    portrait->add_option("--k", f.kList, "k list, e.g. 8..12 or 3,5,7");
    portrait->add_flag("!--no-svg", f.svg, "skip the SVG scatter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (*verify) return cmd_verify(example, f);
        if (*find) return cmd_find_codim4(f);
        if (*check) return cmd_check(point, f);
        if (*sweep) return cmd_sweep(f);
        if (*portrait) return cmd_portrait(f);
    } catch (const ConfigError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitBadInput;
}
