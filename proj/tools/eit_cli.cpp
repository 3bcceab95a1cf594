#include <iostream>
#include <string>
#include <vector>

#include "eit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return eit::cli::run(args, std::cout, std::cerr);
}
