#include "bellnoise/cli.hpp"

int main(int argc, char** argv) { return bellnoise::run_cli(argc, argv); }
