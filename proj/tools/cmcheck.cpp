#include <iostream>
#include <string>
#include <vector>

#include "cmcheck/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cmcheck::cli::run(args, std::cout, std::cerr);
}
