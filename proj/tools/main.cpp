#include <iostream>

#include "ptorsion/cli.hpp"

int main(int argc, char** argv) { return ptorsion::run_cli(argc, argv, std::cout, std::cerr); }
