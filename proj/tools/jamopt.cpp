#include <iostream>
#include <string>
#include <vector>

#include "jamopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return jamopt::run_cli(args, std::cout, std::cerr);
}
