#include <iostream>

#include "smartperm/cli.hpp"

int main(int argc, char** argv) {
    return smartperm::run_cli(argc, argv, std::cout, std::cerr);
}
