#include <iostream>

#include "stochq_app/cli.hpp"

int main(int argc, char** argv) {
  return stochq::app::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
