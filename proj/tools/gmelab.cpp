#include <iostream>

#include "gmelab/cli.hpp"

int main(int argc, char** argv) { return gmelab::cli::main_entry(argc, argv, std::cout, std::cerr); }
