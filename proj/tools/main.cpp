#include <iostream>

#include "qext/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qext::cli::run(args, std::cout, std::cerr);
}
