#include <iostream>

#include "gmlab/cli.hpp"

int main(int argc, char** argv) { return gmlab::cli_main(argc, argv, std::cout, std::cerr); }
