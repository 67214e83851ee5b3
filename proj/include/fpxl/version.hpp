#pragma once

namespace fpxl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fpxl
