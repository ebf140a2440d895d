#include "reldiff/cli.hpp"

int main(int argc, char** argv) { return reldiff::cli_main(argc, argv); }
