#include "urnlab/cli.hpp"

int main(int argc, char **argv) { return urnlab::cli::dispatch(argc, argv); }
