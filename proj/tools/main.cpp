#include "lowbessel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lowbessel::cli::run(argc, argv, std::cout, std::cerr); }
