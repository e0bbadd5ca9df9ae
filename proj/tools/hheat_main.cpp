#include <iostream>
#include <string>
#include <vector>

#include "hheat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hheat::run_cli(args, std::cout, std::cerr);
}
