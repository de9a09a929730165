#pragma once

namespace blockshrink {

inline constexpr const char* version = "0.1.0";

}  // namespace blockshrink
