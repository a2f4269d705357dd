#include "jcsq/cli.hpp"

int main(int argc, char** argv) { return jcsq::cli::run(argc, argv); }
