#include <iostream>

#include "ucq/cli.h"

int main(int argc, char** argv) { return ucq::run_cli(argc, argv, std::cout, std::cerr); }
