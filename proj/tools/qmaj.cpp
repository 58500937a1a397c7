#include <iostream>
#include <string>
#include <vector>

#include "qmaj/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qmaj::run_cli(args, std::cout, std::cerr);
}
