#pragma once

#include <array>
#include <optional>

#include "reactwave/potentials.hpp"

namespace reactwave {

struct MassTriple {
  double m_a, m_b, m_c;  // kg

  void validate() const;
  double total() const { return m_a + m_b + m_c; }
};

// Kinematic factors of the mass-weighted transform:
//   a = sqrt(m_A (m_B + m_C) / M), b = sqrt(m_C (m_A + m_B) / M),
//   tan(beta) = sqrt(m_B M / (m_A m_C)).
struct MassFactors {
  double a, b;        // kg^(1/2)
  double beta_angle;  // rad, in (0, pi/2)

  double sin_beta() const;
  double cos_beta() const;
};

// Free simulation parameters: the simulator-atom mass and the dimensionless
// length scale l linking chemical and simulation frames.
struct ScalingParams {
  double m_tilde;  // kg
  double l;        // dimensionless

  void validate() const;
};

struct ChemCoords {
  double q1, q2;      // m
  double r_cm = 0.0;  // m
};

struct SimCoords {
  double q1, q2;  // m, simulation frame (Q1, Q2)
};

struct LabPositions {
  double x_a, x_b, x_c;  // m
};

struct VelocityPair {
  double v_q1, v_q2;  // m/s, simulation frame
};

MassFactors mass_factors(const MassTriple& masses);

// Q1 = (a q1 + b q2 cos b)/(sqrt(m~) l), Q2 = b q2 sin b/(sqrt(m~) l)
SimCoords to_sim(const ChemCoords& c, const MassFactors& f,
                 const ScalingParams& s);

// Lab positions from simulation coordinates; inverts to_sim through
// q1 = x_B - x_A, q2 = x_C - x_B and restores the center of mass exactly.
LabPositions from_sim(const SimCoords& q, const MassTriple& masses,
                      const MassFactors& f, const ScalingParams& s,
                      double r_cm = 0.0);

ChemCoords chem_from_sim(const SimCoords& q, const MassFactors& f,
                         const ScalingParams& s);

struct SimMomenta {
  double p_cm;   // kg m/s
  double p_q1, p_q2;
};

SimMomenta momentum_to_sim(double p_a, double p_b, double p_c,
                           const MassTriple& masses, const MassFactors& f,
                           const ScalingParams& s);

// The scaled surface V_Q(Q1, Q2) = l^2 V_q(q1(Q), q2(Q)).
class ScaledSurface {
 public:
  ScaledSurface(LepsSurface surface, MassFactors f, ScalingParams s);

  double energy(double sim_q1, double sim_q2) const;
  ChemCoords chem_coords(double sim_q1, double sim_q2) const;
  const LepsSurface& surface() const { return surface_; }
  const MassFactors& factors() const { return factors_; }
  const ScalingParams& scaling() const { return scaling_; }

 private:
  LepsSurface surface_;
  MassFactors factors_;
  ScalingParams scaling_;
};

// Per-channel geometry of the simulation frame: transverse coordinates
// chi_1 = sin(b) Q1 - cos(b) Q2 (products) and chi_2 = Q2 (reactants), their
// equilibrium offsets, scaled force constants and frequencies.
struct SimChannelGeometry {
  double sin_beta, cos_beta;
  double chi10, chi20;          // m
  double k_tilde1, k_tilde2;    // N/m
  double nu_tilde1, nu_tilde2;  // Hz
  double m_tilde;               // kg

  double omega1() const;        // rad/s
  double omega2() const;
  double osc_len1() const;      // sqrt(hbar / (m~ omega)), m
  double osc_len2() const;
  // Coordinates of a point along/across each channel.
  double chi1(double sim_q1, double sim_q2) const;
  double eta1(double sim_q1, double sim_q2) const;  // longitudinal, products
};

SimChannelGeometry channel_geometry(const LepsSurface& surface,
                                    const MassTriple& masses,
                                    const ScalingParams& s);

// Everything an experimental design needs, SI units.
struct DesignReport {
  double nu_tilde_1, nu_tilde_2;  // Hz
  double v_tilde_1, v_tilde_2;    // J
  double v_q1;                    // m/s
  double length_scale_1;          // m of Q per m of q1 displacement
  double length_scale_2;          // m of Q per m of q2 displacement
  double chi_10, chi_20;          // m
  double k_tilde_1, k_tilde_2;    // N/m
  double tau_scale;               // simulation seconds per chemical second
  double l;
  double m_tilde;                 // kg
};

// Inverts nu_tilde_j(l) for the requested channel (1 = products,
// 2 = reactants).
double solve_l(double target_nu_tilde, int channel, const LepsSurface& surface,
               const MassTriple& masses, double m_tilde);

// Thermal launch velocity estimate mapped to the simulation frame;
// v_q2 is identically zero.
VelocityPair initial_velocity(double temperature, const MassTriple& masses,
                              const MassFactors& f, const ScalingParams& s);

// Exactly one of l / target frequency must be supplied; the target frequency
// fixes l through solve_l on the requested channel.
struct DesignInput {
  std::optional<double> l;
  std::optional<double> target_nu_tilde;  // Hz
  int target_channel = 2;
  double temperature = 298.0;  // K
};

DesignReport design_report(const LepsSurface& surface, const MassTriple& masses,
                           double m_tilde, const DesignInput& input);

}  // namespace reactwave
