#include "tacnode/cli.hpp"

int main(int argc, char** argv) { return tacnode::cli::run_cli(argc, argv); }
