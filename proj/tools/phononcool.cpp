#include <iostream>
#include <string>
#include <vector>

#include "phononcool/cli/run.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    return phononcool::cli::run_cli(args, std::cout, std::cerr);
}
