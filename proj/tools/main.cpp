#include "cli.hpp"

int main(int argc, char** argv) { return qmprob::cli::run(argc, argv); }
