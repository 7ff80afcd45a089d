#include <vector>

#include "cpca/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cpca::run_cli(args);
}
