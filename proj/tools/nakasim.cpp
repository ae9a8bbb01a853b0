#include <iostream>

#include "nakasim/cli.hpp"

int main(int argc, char** argv) { return nakasim::cli::run(argc, argv, std::cout, std::cerr); }
