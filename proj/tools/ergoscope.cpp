#include "ergoscope/cli.hpp"

int main(int argc, char** argv) { return ergoscope::cli_main(argc, argv); }
