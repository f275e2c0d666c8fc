#include <iostream>
#include <string>
#include <vector>

#include "ontic/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ontic::cli::run(args, std::cout, std::cerr);
}
