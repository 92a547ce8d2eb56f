#include <fraclms/cli_runner.hpp>

#include <iostream>

int main(int argc, char** argv) { return fraclms::cli::cli_main(argc, argv, std::cout, std::cerr); }
