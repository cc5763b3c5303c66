#include "cyclophase/cli.hpp"

int main(int argc, char** argv) { return cyclophase::run_cli(argc, argv); }
