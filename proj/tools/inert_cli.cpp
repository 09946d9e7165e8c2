#include <iostream>
#include <string>
#include <vector>

#include "inert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return inert::cli::main_entry(args, std::cout, std::cerr);
}
