#include <iostream>
#include <string>
#include <vector>

#include "sft/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sft::cli::run(args, std::cout, std::cerr);
}
