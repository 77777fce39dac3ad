#include <iostream>
#include <string>
#include <vector>

#include "chcspec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chcspec::run(args, std::cout, std::cerr);
}
