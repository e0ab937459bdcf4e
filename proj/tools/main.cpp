#include <iostream>

#include "tsito/cli.hpp"

int main(int argc, char** argv) { return tsito::cli::run(argc, argv, std::cout, std::cerr); }
