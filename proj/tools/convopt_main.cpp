#include <iostream>

#include "convopt/cli.hpp"

int main(int argc, char** argv) { return convopt::runCli(argc, argv, std::cout, std::cerr); }
