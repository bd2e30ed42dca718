#pragma once

namespace husimi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace husimi
