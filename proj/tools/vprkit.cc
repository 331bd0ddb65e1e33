#include <iostream>

#include "vprkit/cli/commands.h"

int main(int argc, char** argv) {
  return vprkit::cli::run_cli(argc, argv, std::cout, std::cerr);
}
