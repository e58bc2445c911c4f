#include <iostream>

#include "levykernel/cli.hpp"

int main(int argc, char** argv)
{
    return levykernel::cli::run_cli(argc, argv, std::cout, std::cerr);
}
