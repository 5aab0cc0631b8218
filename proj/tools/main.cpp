#include <iostream>

#include "mcpf/cli.hpp"

int main(int argc, char** argv) { return mcpf::run_cli(argc, argv, std::cout, std::cerr); }
