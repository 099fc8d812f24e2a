#include <vector>

#include "noma/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return noma::run_cli(args);
}
