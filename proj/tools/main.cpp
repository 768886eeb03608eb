#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return razak_forge::cli::run(std::move(args), std::cout, std::cerr);
}
