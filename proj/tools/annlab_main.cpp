#include "annlab/scenario.hpp"

int main(int argc, char** argv) { return annlab::run_cli(argc, argv); }
