#include "cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) { return gitgauge::cli::run(argc, argv, std::cout, std::cin); }
