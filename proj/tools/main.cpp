#include <iostream>

#include "qbessel/cli.hpp"

int main(int argc, char** argv) {
  return qbessel::cli::main_entry(argc, argv, std::cout, std::cerr);
}
