#include "displab/cli.hpp"

int main(int argc, char** argv) { return displab::run(argc, argv); }
