#include <iostream>

#include "odofock/cli.hpp"

int main(int argc, char** argv) { return odofock::run_cli(argc, argv, std::cout, std::cerr); }
