#pragma once

#include <numbers>

// CODATA 2018 exact SI values.
namespace qpcd::constants {

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double boltzmann = 1.380649e-23;             // J/K
inline constexpr double reduced_planck = planck / (2.0 * std::numbers::pi);

// 2e^2/h in siemens.
inline constexpr double conductance_quantum =
    2.0 * elementary_charge * elementary_charge / planck;

inline constexpr double micro = 1e-6;
inline constexpr double milli = 1e-3;

// k_B in micro-electronvolts per kelvin.
inline constexpr double boltzmann_uev_per_k = boltzmann / elementary_charge / micro;

}  // namespace qpcd::constants
