#include "cli.hpp"

int main(int argc, char** argv) { return specest::cli::run(argc, argv); }
