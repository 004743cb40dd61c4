#include <cstdlib>
#include <iostream>

#include "bellproc/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return bellproc::cli::run(argc, argv, std::cout, std::cerr, std::getenv("BELLPROC_SEED"));
}
