#include "pinchlab/cli.hpp"

int main(int argc, char** argv) {
  return pinchlab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
