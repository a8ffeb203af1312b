#include "motcalc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return motcalc::cli::run(argc, argv, std::cout, std::cerr); }
