#include <iostream>

#include "qclust_cli.hpp"

int main(int argc, char** argv) { return qclust::cli::run(argc, argv, std::cout, std::cerr); }
