#include <iostream>

#include "dpwaves/cli.hpp"

int main(int argc, char** argv) { return dpwaves::cli::run(argc, argv, std::cout, std::cerr); }
