#include <string>
#include <vector>

#include "piclab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return piclab::cli::run_cli(args);
}
