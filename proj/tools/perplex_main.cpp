#include <iostream>

#include "perplex/cli.hpp"

int main(int argc, char** argv) {
  return perplex::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
