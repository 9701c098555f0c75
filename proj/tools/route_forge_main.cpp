#include <iostream>

#include "route_forge/cli.hpp"

int main(int argc, char** argv) {
  return route_forge::cli::run(argc, argv, std::cout, std::cerr);
}
