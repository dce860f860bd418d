#pragma once

namespace nonsing {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nonsing
