#include <iostream>

#include "cubeslice/cli.hpp"

int main(int argc, char** argv) { return cubeslice::cli::run(argc, argv, std::cout, std::cerr); }
