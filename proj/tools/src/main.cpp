#include <iostream>

#include "xilab/cli.hpp"

int main(int argc, char** argv) { return xilab::cli::run(argc, argv, std::cout, std::cerr); }
