#include "abwave/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return abwave::cli::run(argc, argv, std::cout, std::cerr); }
