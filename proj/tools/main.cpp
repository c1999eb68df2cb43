#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return embedlab::cli::run_cli(args, std::cout, std::cerr, embedlab::cli::environment_from_process());
}
