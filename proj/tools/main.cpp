#include <iostream>

#include "gemdpde/cli.hpp"

int main(int argc, char** argv) { return gemdpde::cli::run(argc, argv, std::cout, std::cerr); }
