#include <iostream>
#include <string>
#include <vector>

#include "cosim/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cosim::run_cli(std::move(args), std::cout, std::cerr);
}
