#include "wvi/cli.hpp"

int main(int argc, char** argv) { return wvi::run_cli(argc, argv); }
