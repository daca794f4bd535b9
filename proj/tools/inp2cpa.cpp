#include <iostream>
#include <string>
#include <vector>

#include "inp2cpa/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return inp2cpa::run_cli(args, std::cout, std::cerr);
}
