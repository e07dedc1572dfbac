#include <iostream>

#include "dgfem/cli.hpp"

int main(int argc, char** argv) {
  return dgfem::run_cli(argc, argv, std::cout, std::cerr);
}
