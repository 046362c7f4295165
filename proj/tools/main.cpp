#include "textarea/cli.hpp"

int main(int argc, char** argv) { return textarea::cli::run(argc, argv); }
