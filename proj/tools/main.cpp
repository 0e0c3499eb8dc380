#include "blinkforge/cli.hpp"

int main(int argc, char** argv) { return blinkforge::cli::run(argc, argv); }
