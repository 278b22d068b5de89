#include "phyn/cli.hpp"

int main(int argc, char** argv) { return phyn::cli::run(argc, argv); }
