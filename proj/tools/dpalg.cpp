#include <iostream>

#include "dpalg/cli.hpp"

int main(int argc, char** argv) { return dpalg::cli::run(argc, argv, std::cout, std::cerr); }
