#include "bitreset/cli.hpp"

int main(int argc, char **argv) { return bitreset::run_cli(argc, argv); }
