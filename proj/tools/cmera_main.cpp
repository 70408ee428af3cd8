#include "cmera/cli.hpp"

int main(int argc, char** argv) { return cmera::run_cli(argc, argv); }
