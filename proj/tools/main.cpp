#include <vector>

#include "seqsum/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return seqsum::cli::run(args);
}
