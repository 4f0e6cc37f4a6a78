#include <iostream>
#include <string>
#include <vector>

#include "stoplab/commands.hpp"

int main(int argc, char** argv) {
  stoplab::cli::install_signal_handlers();
  std::vector<std::string> args(argv, argv + argc);
  return stoplab::cli::run_cli(args, std::cout, std::cerr);
}
