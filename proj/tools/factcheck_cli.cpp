#include <iostream>

#include "factcheck/service/cli.hpp"

int main(int argc, char** argv) { return factcheck::service::cli_main(argc, argv, std::cout, std::cerr); }
