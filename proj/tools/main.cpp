#include <iostream>

#include "inferbench/cli.hpp"

int main(int argc, char** argv) {
  return inferbench::run_cli(argc, argv, std::cout, std::cerr);
}
