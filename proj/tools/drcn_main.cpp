#include "drcn/cli.hpp"

int main(int argc, char** argv) { return drcn::run_cli(argc, argv); }
