#pragma once

#include <string_view>

namespace renderproof {

inline constexpr std::string_view kToolVersion = "renderproof 0.1.0";

}  // namespace renderproof
