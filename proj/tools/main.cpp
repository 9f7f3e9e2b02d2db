#include <iostream>

#include "btu/cli.hpp"

int main(int argc, char** argv) { return btu::run_cli(argc, argv, std::cout, std::cerr); }
