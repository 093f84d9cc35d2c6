#include "fpt/cli.hpp"

int main(int argc, char** argv) { return fpt::run_command(argc, argv); }
