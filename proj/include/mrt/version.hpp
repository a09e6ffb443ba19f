#pragma once

namespace mrt {

inline constexpr const char* kVersion = "0.1.0";

} // namespace mrt
