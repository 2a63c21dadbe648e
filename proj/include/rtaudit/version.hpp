#pragma once

namespace rtaudit {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever an emitted file layout changes.
inline constexpr int kFormatVersion = 1;

}  // namespace rtaudit
