#include <iostream>

#include "rydgate/cli.hpp"

int main(int argc, char** argv) {
  return rydgate::run_cli(argc, argv, std::cout, std::cerr);
}
