#pragma once

namespace sppdcj {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sppdcj
