#include "dacml/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return dacml::cli::run_cli(argc, argv, std::cout, std::cerr); }
