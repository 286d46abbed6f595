#include <iostream>

#include "pelve/cli.hpp"

int main(int argc, char** argv) { return pelve::cli::run(argc, argv, std::cout, std::cerr); }
