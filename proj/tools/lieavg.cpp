#include "lieavg/cli.hpp"

int main(int argc, char** argv) { return lieavg::cli::run(argc, argv); }
