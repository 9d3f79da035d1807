#include <iostream>

#include "semshift/pipeline.hpp"

int main(int argc, char** argv) { return semshift::run_cli(argc, argv, std::cout, std::cerr); }
