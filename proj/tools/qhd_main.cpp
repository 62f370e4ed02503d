#include <iostream>
#include <string>
#include <vector>

#include "qhd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qhd::run_command(args, std::cout, std::cerr);
}
