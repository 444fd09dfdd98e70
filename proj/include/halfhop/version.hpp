#pragma once

namespace halfhop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace halfhop
