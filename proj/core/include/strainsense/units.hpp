#pragma once

#include <cmath>
#include <numbers>

namespace strainsense::units {

// Internally every frequency-like quantity is an angular frequency in rad/s
// (hbar = 1). These helpers convert at the boundary.

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kMicrostrain = 1e-6;

constexpr double from_hz(double f_hz) { return kTwoPi * f_hz; }
constexpr double to_hz(double omega) { return omega / kTwoPi; }

constexpr double ghz(double f) { return from_hz(f * 1e9); }
constexpr double mhz(double f) { return from_hz(f * 1e6); }

constexpr double nanoseconds(double t) { return t * 1e-9; }

}  // namespace strainsense::units
