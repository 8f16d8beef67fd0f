#include <iostream>
#include <string>
#include <vector>

#include "assoc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return assoc::cli::run(args, std::cin, std::cout, std::cerr);
}
