#include "maintmine/cli.hpp"

int main(int argc, char **argv) { return maintmine::cli::run({argv + 1, argv + argc}); }
