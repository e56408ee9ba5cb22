#include "davn/cli.hpp"

int main(int argc, char** argv) { return davn::cli::main(argc, argv); }
