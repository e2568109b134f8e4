#include "persep/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return persep::cli_main(argc, argv, std::cout, std::cerr);
}
