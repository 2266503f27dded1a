#include <iostream>

#include "lecdc/cli.hpp"

int main(int argc, char** argv) { return lecdc::cli::run(argc, argv, std::cout, std::cerr); }
