#include <iostream>

#include "posicert/cli.hpp"

int main(int argc, char** argv) {
  return posicert::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
