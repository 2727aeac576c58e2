#include <vector>

#include "specind/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return specind::cli_main(args);
}
