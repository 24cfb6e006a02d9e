#include <iostream>

#include "dipole/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dipole::cli::run(args, std::cout, std::cerr);
}
