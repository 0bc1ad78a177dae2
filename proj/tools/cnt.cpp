#include "cnt/cli.hpp"

int main(int argc, char** argv) { return cnt::cli::main(argc, argv); }
