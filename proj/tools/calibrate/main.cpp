#include <iostream>

#include "calib/trainer/cli.hpp"

int main(int argc, char** argv) {
  return calib::trainer::run(argc, argv, std::cout, std::cerr);
}
