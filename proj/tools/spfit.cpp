#include <iostream>

#include "spfit/cli.hpp"

int main(int argc, char** argv) { return spfit::run_cli(argc, argv, std::cout, std::cerr); }
