#include "nonsing/cli.hpp"

int main(int argc, char** argv) { return nonsing::cli_main(argc, argv); }
