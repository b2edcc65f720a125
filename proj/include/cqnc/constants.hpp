#pragma once

namespace cqnc {

inline constexpr char kVersion[] = "0.1.0";

// CODATA 2018 / exact SI values.
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;   // J / K

// (i*w*I - M) is treated as numerically singular when i*w approaches a
// drift pole within a relative distance 1/kConditionCap. Physical
// parameter sets keep all poles off the real axis, so a trip means a
// pole landed on the frequency grid.
inline constexpr double kConditionCap = 1e12;

// Floor for |force -> phase|^2 below which the force signal is
// considered destroyed (e.g. a zero-efficiency link).
inline constexpr double kForceCoeffFloor = 1e-30;

} // namespace cqnc
