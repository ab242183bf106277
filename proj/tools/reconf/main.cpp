#include <iostream>
#include <string>
#include <vector>

#include "reconf/cli.hpp"

int main(int argc, char** argv) {
  return reconf::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
