#pragma once

#include <array>

#include "reactwave/errors.hpp"

namespace reactwave {

// Morse parameters of one diatomic pair. SI units throughout.
struct DiatomSpec {
  double dissociation_energy;  // D, J
  double beta_morse;           // 1/m
  double equilibrium_distance; // q0, m
  double reduced_mass;         // kg

  void validate() const;
  double force_constant() const;  // K = 2 D beta^2, N/m
};

struct HarmonicParams {
  double force_constant;  // N/m
  double frequency;       // Hz
};

// V(q) = D [1 - e^{-beta (q - q0)}]^2
double morse_energy(const DiatomSpec& spec, double q);

// K = 2 D beta^2, nu = sqrt(K/mu)/(2 pi)
HarmonicParams harmonic_params(const DiatomSpec& spec);

// Three-pair LEPS surface. Pair 1 = AB (products), pair 2 = BC (reactants),
// pair 3 = AC; the third internuclear distance is q3 = q1 + q2. A single Sato
// parameter applies to all pairs.
class LepsSurface {
 public:
  LepsSurface(DiatomSpec ab, DiatomSpec bc, DiatomSpec ac, double sato_delta);

  const DiatomSpec& diatom(int pair) const;  // pair in {1,2,3}
  const DiatomSpec& ab() const { return diatoms_[0]; }
  const DiatomSpec& bc() const { return diatoms_[1]; }
  const DiatomSpec& ac() const { return diatoms_[2]; }
  double sato() const { return delta_; }

  // Radicand values in (-eps_rad, 0) are clamped to zero; below -eps_rad the
  // evaluation throws (the exact radicand is a sum of squares, so a genuinely
  // negative value means inconsistent inputs).
  double energy(double q1, double q2) const;
  std::array<double, 2> gradient(double q1, double q2) const;   // J/m
  std::array<double, 4> hessian(double q1, double q2) const;    // row-major 2x2, J/m^2

  // Valley floor of the asymptotic channel: -D of the given pair.
  double channel_asymptote(int pair) const;

  double radicand_epsilon() const { return eps_rad_; }

 private:
  struct Terms;
  Terms eval_terms(double q1, double q2, int order) const;

  std::array<DiatomSpec, 3> diatoms_;
  double delta_;
  double eps_rad_;
};

}  // namespace reactwave
