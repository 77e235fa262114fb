#include <iostream>

#include "wkbq/cli.hpp"

int main(int argc, char** argv) { return wkbq::run_cli(argc, argv, std::cout, std::cerr); }
