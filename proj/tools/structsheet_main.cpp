#include <iostream>
#include <string>
#include <vector>

#include "structsheet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return structsheet::cli::run(args, std::cout, std::cerr);
}
