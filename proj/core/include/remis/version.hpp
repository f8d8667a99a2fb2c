#pragma once

namespace remis {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace remis
