#include "hokalman/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hokalman::run_cli(argc, argv, std::cout, std::cerr); }
