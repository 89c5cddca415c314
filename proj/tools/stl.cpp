#include "stlab/harness.hpp"

int main(int argc, char** argv) { return stlab::run_cli(argc, argv); }
