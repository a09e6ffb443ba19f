#pragma once

namespace mrt {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEpsilon0 = 8.8541878128e-12; // F/m, vacuum permittivity

} // namespace mrt
