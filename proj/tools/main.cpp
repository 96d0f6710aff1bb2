#include "commands.hpp"

int main(int argc, char** argv) { return gapforge::cli::run(argc, argv); }
