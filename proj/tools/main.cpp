#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return nlca::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
