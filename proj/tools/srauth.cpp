#include <iostream>
#include <string>
#include <vector>

#include "srauth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return srauth::cli::Run(args, std::cout, std::cerr);
}
