#include <iostream>

#include "kerrphc/cli/commands.hpp"

int main(int argc, char** argv) {
  return kerrphc::cli::run_cli(argc, argv, std::cout, std::cerr);
}
