#include <iostream>

#include "ufix/cli.hpp"

int main(int argc, char** argv) {
    return ufix::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
