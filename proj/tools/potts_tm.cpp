#include "potts/cli.hpp"

int main(int argc, char** argv) { return potts::cli::main(argc, argv); }
