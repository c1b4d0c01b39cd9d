#include "msim/cli.hpp"

int main(int argc, char** argv) { return msim::run_cli(argc, argv); }
