// constants.hpp - SI physical constants (exact 2019 SI values)

#pragma once

#include <numbers>

namespace phononcool::si {

inline constexpr double pi = std::numbers::pi;
inline constexpr double elementary_charge = 1.602176634e-19;    // C
inline constexpr double planck = 6.62607015e-34;                // J s
inline constexpr double hbar = planck / (2.0 * pi);             // J s
inline constexpr double boltzmann = 1.380649e-23;               // J / K

// Unit helpers. "MHz" follows the convention of quoting rates and angular
// frequencies in units of 1e6 per second without dividing by 2 pi.
inline constexpr double mhz = 1.0e6;
inline constexpr double ns = 1.0e-9;
inline constexpr double us = 1.0e-6;
inline constexpr double attofarad = 1.0e-18;
inline constexpr double micro_ev = 1.0e-6 * elementary_charge;
inline constexpr double millikelvin = 1.0e-3;

} // namespace phononcool::si
