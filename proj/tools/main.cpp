#include "gribov/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gribov::cli_main(argc, argv, std::cout, std::cerr); }
