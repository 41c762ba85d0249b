#include "cli.hpp"

int main(int argc, char** argv) { return windwoa::cli::cli_main(argc, argv); }
