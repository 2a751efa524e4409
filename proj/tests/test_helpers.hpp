#pragma once

#include "reactwave/frames.hpp"
#include "reactwave/potentials.hpp"

namespace reactwave::testing {

inline constexpr double kAngstrom = 1e-10;

// F + H2 -> HF + H reference system (masses as printed, Sato delta 0.164).
// Pair 1 = AB = HF, pair 2 = BC = HH, pair 3 = AC = HF.
inline MassTriple fh2_masses() { return {3.15e-26, 1.66e-27, 1.66e-27}; }

inline DiatomSpec hf_spec() {
  const MassTriple m = fh2_masses();
  return {9.609e-19, 2.242e10, 0.917e-10, m.m_a * m.m_b / (m.m_a + m.m_b)};
}

inline DiatomSpec hh_spec() {
  const MassTriple m = fh2_masses();
  return {7.608e-19, 1.942e10, 0.742e-10, m.m_b * m.m_c / (m.m_b + m.m_c)};
}

inline LepsSurface fh2_surface(double sato = 0.164) {
  return {hf_spec(), hh_spec(), hf_spec(), sato};
}

// Symmetric A = C system built from three identical HH pairs.
inline LepsSurface h3_surface(double sato = 0.1) {
  return {hh_spec(), hh_spec(), hh_spec(), sato};
}

inline ScalingParams li7_scaling() { return {1.1526e-26, 6.55e-6}; }

}  // namespace reactwave::testing
