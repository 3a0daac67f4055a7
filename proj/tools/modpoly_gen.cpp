// Offline generator for the bundled classical modular polynomials.
// Writes phi_<ell>.txt files in the documented text format, derived from
// the integer q-expansion of j.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cm/modpoly.hpp"

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <outdir> <ell> [<ell> ...]\n", argv[0]);
        return 2;
    }
    std::string outdir = argv[1];
    for (int i = 2; i < argc; ++i) {
        long ell = std::stol(argv[i]);
        auto M = cm::ModPoly::compute(ell);
        std::string path = outdir + "/phi_" + std::to_string(ell) + ".txt";
        std::ofstream out(path);
        out << M.to_text();
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}
