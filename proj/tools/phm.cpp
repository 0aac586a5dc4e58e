#include <iostream>

#include "phm/cli.hpp"

int main(int argc, char** argv) { return phm::cli::run(argc, argv, std::cout, std::cerr); }
