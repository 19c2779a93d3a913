#include <iostream>

#include "kqet/cli.hpp"

int main(int argc, char** argv) {
  return kqet::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
