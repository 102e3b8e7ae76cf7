#include <iostream>

#include "sfaas/cli.hpp"

int main(int argc, char** argv) { return sfaas::run_cli(argc, argv, std::cout, std::cerr); }
