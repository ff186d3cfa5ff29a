#include <iostream>

#include "citepred/cli.hpp"

int main(int argc, char** argv) { return citepred::cli::run(argc, argv, std::cout, std::cerr); }
