#include "heunpot/cli.hpp"
#include <iostream>
int main(int argc, char** argv) { return heunpot::run_cli(argc, argv, std::cout, std::cerr); }
