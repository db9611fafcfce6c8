#include <iostream>
#include <string>
#include <vector>

#include "lsemplus/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lsemplus::cli::run(args, std::cout, std::cerr);
}
