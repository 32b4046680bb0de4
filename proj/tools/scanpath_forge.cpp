#include <iostream>
#include <string>
#include <vector>

#include "sf/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sf::cli::run(args, std::cout, std::cerr);
}
