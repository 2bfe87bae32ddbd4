#include <iostream>
#include <string>
#include <vector>

#include "curvegraph/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curvegraph::run(args, std::cout, std::cerr);
}
