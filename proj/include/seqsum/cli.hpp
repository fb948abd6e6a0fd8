#pragma once

#include <string>
#include <vector>

namespace seqsum::cli {

// Dispatches seq | search | cfrac | matveev | reduce | legendre | certify.
// args excludes the program name.  Exit codes: 0 success, 1 verification or
// verdict failure, 2 invalid input, 3 precision exhaustion.
int run(const std::vector<std::string>& args);

}  // namespace seqsum::cli
