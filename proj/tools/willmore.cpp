#include <iostream>

#include "willmore/app.hpp"

int main(int argc, char** argv) { return willmore::app::run_cli(argc, argv, std::cout, std::cerr); }
