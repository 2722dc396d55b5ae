#include <iostream>

#include "crnlap/cli.hpp"

int main(int argc, char** argv) { return crnlap::run_cli(argc, argv, std::cout, std::cerr); }
