#include "spinprobe/cli.hpp"

int main(int argc, char** argv) { return spinprobe::cli::main(argc, argv); }
