#include "cli.hpp"

int main(int argc, char** argv) { return grushin::cli::run(argc, argv); }
