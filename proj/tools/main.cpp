#include "hcz/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hcz::cli::run_command_line(args, std::cout, std::cerr);
}
