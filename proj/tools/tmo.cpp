#include "tmo/cli.hpp"

int main(int argc, char** argv) { return tmo::run_cli(argc, argv); }
