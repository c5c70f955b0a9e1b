#pragma once

namespace qmix {

inline constexpr const char* kToolName = "qmix";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace qmix
