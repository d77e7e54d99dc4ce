#include "cdimpact/cli.hpp"

int main(int argc, char** argv) { return cdimpact::cli_main(argc, argv); }
