#include <iostream>
#include <string>
#include <vector>

#include "renderproof/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return renderproof::dispatch(args, std::cout, std::cerr);
}
