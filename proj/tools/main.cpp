#include "cfgdw/cli.hpp"

int main(int argc, char** argv) { return cfgdw::cli_main(argc, argv); }
