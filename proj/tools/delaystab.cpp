#include <iostream>
#include <string>
#include <vector>

#include "delaystab/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return delaystab::run_cli(args, std::cout, std::cerr);
}
