// Locate codimension-four points for a pair of words given on the command line.

#include <bcnf/codim4.hpp>

#include <cstdio>
#include <string>

using namespace bcnf;

int main(int argc, char** argv) {
    const Word X = parse_word(argc > 1 ? argv[1] : "L");
    const Word Y = parse_word(argc > 2 ? argv[2] : "RRRRR");
    for (const auto& c : find_codim4(X, Y, 1.0, Box{}, {})) {
        std::printf("tauL %+.12f deltaL %.12f tauR %+.12f deltaR %.12f  %s\n", c.params.tauL, c.params.deltaL,
                    c.params.tauR, c.params.deltaR,
                    c.probe.viable ? "viable" : (c.probe.allVirtual ? "all-virtual" : "not viable"));
    }
}
