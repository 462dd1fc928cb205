#include "hilfer/cli.hpp"

int main(int argc, char** argv) { return hilfer::cli::dispatch(argc, argv); }
