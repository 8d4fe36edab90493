#include <iostream>
#include <string>
#include <vector>

#include "granular/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return granular::cli::main(args, std::cout, std::cerr);
}
