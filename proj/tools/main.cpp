#include <iostream>

#include "ordmatch/cli.hpp"

int main(int argc, char** argv) { return ordmatch::cli::run(argc, argv, std::cout, std::cerr); }
