#include "topopump/cli.hpp"

int main(int argc, char** argv) { return topopump::cli::run(argc, argv); }
