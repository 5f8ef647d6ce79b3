// S[k] = X^k Y cycles at paramA: admissibility and multipliers for k = 1..14.

#include <bcnf/normal_form.hpp>
#include <bcnf/presets.hpp>

#include <cstdio>

using namespace bcnf;

int main() {
    const Params p = presets::paramA();
    const Word X = "RRL"_w, Y = "LRLL"_w;
    std::printf("%3s %10s %12s %12s  %s\n", "k", "admissible", "det", "trace", "stability");
    for (int k = 1; k <= 14; ++k) {
        // multipliers are exactly (-1, -1) here, so classify with a small tolerance
        const Cycle c = solve_cycle(p, family_word(X, k, Y), 1e-9);
        const bool adm = classify_admissibility(c) == Admissibility::Admissible;
        std::printf("%3d %10s %12.8f %12.8f  %s\n", k, adm ? "yes" : "no", c.detM, c.traceM, to_string(c.stability));
    }
}
