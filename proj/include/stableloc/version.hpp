#pragma once

namespace stableloc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stableloc
