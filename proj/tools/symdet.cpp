#include <iostream>

#include "symdet_cli.hpp"

int main(int argc, char** argv) {
  return symdet::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
