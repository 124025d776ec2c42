#include <iostream>
#include <string>
#include <vector>

#include "jugglepac/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  return jpac::run_cli(args, std::cout, std::cerr);
}
