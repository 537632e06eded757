#include <iostream>

#include "ubern/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ubern::run_cli(args, std::cout, std::cerr, ubern::CliEnvironment::from_process());
}
