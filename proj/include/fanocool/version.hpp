#pragma once

namespace fanocool {

inline constexpr const char* version = "0.1.0";

} // namespace fanocool
