#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return phcausal::cli::run(argc, argv, std::cerr); }
