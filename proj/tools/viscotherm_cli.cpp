#include "viscotherm/cli.hpp"

int main(int argc, char** argv) { return viscotherm::cli_main(argc, argv); }
