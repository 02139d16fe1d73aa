#include "mgn/cli.hpp"

int main(int argc, char** argv) { return mgn::run_cli(argc, argv); }
