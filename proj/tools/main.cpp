#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return taulab::cli::dispatch(argc, argv, std::cout, std::cerr); }
