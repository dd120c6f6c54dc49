#include <iostream>
#include <string>
#include <vector>

#include "meanbound/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return meanbound::run_app(args, std::cout, std::cerr);
}
