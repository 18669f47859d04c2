#include <iostream>
#include <string>
#include <vector>

#include "oppbridge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return oppbridge::cli::run(args, oppbridge::cli::Environment::from_process(), std::cout, std::cerr);
}
