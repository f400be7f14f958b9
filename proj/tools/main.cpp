#include "tsnreorder/cli.hpp"

int main(int argc, char** argv) { return tsnreorder::cli::run(argc, argv, std::cout, std::cerr); }
