#include "dri/cli.hpp"

int main(int argc, char** argv) { return dri::cli_main(argc, argv); }
