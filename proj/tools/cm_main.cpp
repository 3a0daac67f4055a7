#include <vector>
#include <string>

#include "cm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cm::cli_main(args);
}
