#include <iostream>

#include "geoflow/cli.hpp"

int main(int argc, char** argv) {
  return geoflow::cli_main(argc, argv, std::cout, std::cerr);
}
