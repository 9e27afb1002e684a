#include "cli.hpp"

int main(int argc, char** argv) { return flightrl::cli::run(argc, argv); }
