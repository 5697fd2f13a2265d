#include <iostream>
#include <string>
#include <vector>

#include <h1geo/cli_app.hpp>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return h1geo::run_cli(args, std::cout, std::cerr);
}
