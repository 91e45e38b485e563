#include <iostream>

#include "apmqec/cli.h"

int main(int argc, char **argv) { return apmqec::run_cli(argc, argv, std::cout, std::cerr); }
