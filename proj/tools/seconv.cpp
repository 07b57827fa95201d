#include <iostream>

#include "seconv/cli.hpp"

int main(int argc, char** argv) { return seconv::run_cli(argc, argv, std::cout, std::cerr); }
