#pragma once

namespace slameval {

inline constexpr const char* kToolName = "slameval";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace slameval
