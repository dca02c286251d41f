#include "blowup/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return blowup::cli::main_entry(argc, argv, std::cout, std::cerr);
}
