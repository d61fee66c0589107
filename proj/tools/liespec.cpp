#include <iostream>

#include "liespec/cli.hpp"

int main(int argc, char** argv) { return liespec::run_cli(argc, argv, std::cout, std::cerr); }
