#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  int code = 0;
  const auto spec = rbm::cli::parse_command_line(argc, argv, code, std::cout, std::cerr);
  if (!spec) return code;
  return rbm::cli::run(*spec, std::cout, std::cerr);
}
