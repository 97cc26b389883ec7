#include <iostream>

#include "gbm/cli.hpp"

int main(int argc, char** argv) { return gbm::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
