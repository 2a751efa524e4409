#pragma once

#include "reactwave/errors.hpp"

namespace reactwave::constants {

// CODATA recommended values, SI.
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double h_planck = 6.62607015e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double amu = 1.66053907e-27;          // kg

}  // namespace reactwave::constants

namespace reactwave::units {

// Pure scalar conversion factors. Everything internal is SI; these exist for
// config parsing and report formatting only.
inline constexpr double angstrom_to_m = 1e-10;
inline constexpr double m_to_angstrom = 1e10;
inline constexpr double joule_to_microkelvin = 1e6 / constants::k_boltzmann;
inline constexpr double microkelvin_to_joule = 1.0 / joule_to_microkelvin;
inline constexpr double hz_to_khz = 1e-3;
inline constexpr double m_per_s_to_mm_per_s = 1e3;

// E / k_B, rejecting negative energies.
inline double energy_to_temperature(double energy_joule) {
  if (!(energy_joule >= 0.0))
    throw validation_error("energy_to_temperature: energy must be >= 0");
  return energy_joule / constants::k_boltzmann;
}

inline double temperature_to_energy(double kelvin) {
  if (!(kelvin >= 0.0))
    throw validation_error("temperature_to_energy: temperature must be >= 0");
  return kelvin * constants::k_boltzmann;
}

}  // namespace reactwave::units
