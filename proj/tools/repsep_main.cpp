#include <iostream>

#include "repsep/cli.hpp"

int main(int argc, char** argv) { return repsep::cli::run(argc, argv, std::cout, std::cerr); }
