#include <iostream>

#include "stein/cli.hpp"

int main(int argc, char** argv) { return stein::run(argc, argv, std::cout, std::cerr); }
