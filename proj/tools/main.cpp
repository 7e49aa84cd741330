#include "pmeround/cli.hpp"

int main(int argc, char** argv) { return pmeround::cli_main(argc, argv); }
