#include "macgof_cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return macgof::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
