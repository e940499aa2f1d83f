#include <iostream>

#include "twosided/cli.hpp"

int main(int argc, char** argv) { return twosided::cli::run(argc, argv, std::cout, std::cerr); }
