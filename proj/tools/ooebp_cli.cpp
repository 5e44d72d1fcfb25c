#include "ooebp/cli.hpp"

int main(int argc, char** argv) { return ooebp::cli::run(argc, argv); }
