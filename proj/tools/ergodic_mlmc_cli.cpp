#include "commands.hpp"

#include <string>
#include <vector>

int main(int argc, char** argv) {
  return ergodic_mlmc::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
