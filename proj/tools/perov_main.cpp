#include "perov/cli.hpp"

int main(int argc, char** argv) { return perov::cli::run(argc, argv); }
