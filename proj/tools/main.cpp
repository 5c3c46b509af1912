#include <iostream>

#include "bathy/commands.hpp"

int main(int argc, char** argv) {
  return bathy::cli::run(argc, argv, std::cout, std::cerr);
}
