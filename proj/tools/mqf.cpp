#include "mqf/cli.hpp"

int main(int argc, char** argv) { return mqf::cli::run(argc, argv); }
