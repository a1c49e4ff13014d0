#include "loopsim/cli.hpp"

int main(int argc, char** argv) { return loopsim::cli::run(argc, argv); }
