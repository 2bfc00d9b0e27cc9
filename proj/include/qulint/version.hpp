#pragma once

namespace qulint {

inline constexpr const char* kToolName = "qulint";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qulint
