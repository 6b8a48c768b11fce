#include "bbpyr/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return bbpyr::cli::run(argc, argv, std::cout, std::cerr);
}
