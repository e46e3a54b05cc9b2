#pragma once

namespace geovex {

inline constexpr const char* tool_version = "0.1.0";

}  // namespace geovex
