#include <iostream>

#include "esl/cli.hpp"

int main(int argc, char** argv) {
  return esl::cli::main_entry(argc, argv, std::cout, std::cerr);
}
