#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace renderproof {

// Exit codes: 0 success, 1 usage, 2 invalid input (parse/schema/validation/
// file IO), 3 metric precondition failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace renderproof
