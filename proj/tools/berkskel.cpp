#include <iostream>
#include <string>
#include <vector>

#include "berkskel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return berkskel::run_cli(args, std::cout, std::cerr);
}
