#include <iostream>
#include <string>
#include <vector>

#include "fcg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fcg::cli::run(args, std::cout, std::cerr);
}
