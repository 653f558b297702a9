#pragma once

namespace spinwright {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace spinwright
