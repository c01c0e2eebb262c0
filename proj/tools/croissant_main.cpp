#include <iostream>

#include "croissant/cli.hpp"

int main(int argc, char** argv) { return croissant::cli::run(argc, argv, std::cout, std::cerr); }
