#include <iostream>

#include "sofic/cli.hpp"

int main(int argc, char** argv) { return sofic::cli::run(argc, argv, std::cout, std::cerr); }
