#include "gridnav/cli.hpp"

int main(int argc, char** argv) { return gridnav::cli_main(argc, argv); }
