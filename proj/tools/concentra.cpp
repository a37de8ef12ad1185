#include <iostream>

#include "concentra/cli.hpp"

int main(int argc, char** argv) { return concentra::run_cli(argc, argv, std::cout, std::cerr); }
