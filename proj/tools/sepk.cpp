#include <iostream>

#include "sepk/cli.hpp"

int main(int argc, char** argv) { return sepk::cli::run(argc, argv, std::cout, std::cerr); }
