#include <iostream>
#include <string>
#include <vector>

#include "webrank/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return webrank::cli::run_command(args, std::cout, std::cerr);
}
