#pragma once

namespace gustrata {

inline constexpr const char* kToolName = "gustrata";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace gustrata
