#include <iostream>
#include <string>
#include <vector>

#include "hma/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hma::cli::run(args, std::cout, std::cerr);
}
