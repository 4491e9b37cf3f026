#include <iostream>
#include <string>
#include <vector>

#include "mrg/cli.hpp"

int main(int argc, char** argv) {
  return mrg::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
