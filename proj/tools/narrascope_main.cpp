#include <iostream>

#include "narrascope/cli/cli.hpp"

int main(int argc, char** argv) {
  return narrascope::cli::cli_main(argc, argv, std::cout, std::cerr);
}
