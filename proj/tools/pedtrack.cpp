#include <iostream>
#include <string>
#include <vector>

#include "pedtrack/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pedtrack::run_cli(args, std::cout, std::cerr);
}
