#include <iostream>

#include "mathwb/cli.hpp"

int main(int argc, char** argv) { return mathwb::cli::run(argc, argv, std::cout, std::cerr); }
