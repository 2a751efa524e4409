#include "reactwave/frames.hpp"

#include <cmath>

#include "reactwave/constants.hpp"

namespace reactwave {

using constants::hbar;
using constants::k_boltzmann;
using constants::pi;

void MassTriple::validate() const {
  if (!(m_a > 0.0) || !(m_b > 0.0) || !(m_c > 0.0))
    throw validation_error("MassTriple: masses must be > 0");
}

double MassFactors::sin_beta() const { return std::sin(beta_angle); }
double MassFactors::cos_beta() const { return std::cos(beta_angle); }

void ScalingParams::validate() const {
  if (!(m_tilde > 0.0)) throw validation_error("ScalingParams: m_tilde must be > 0");
  if (!(l > 0.0)) throw validation_error("ScalingParams: l must be > 0");
}

MassFactors mass_factors(const MassTriple& m) {
  m.validate();
  const double total = m.total();
  MassFactors f{};
  f.a = std::sqrt(m.m_a * (m.m_b + m.m_c) / total);
  f.b = std::sqrt(m.m_c * (m.m_a + m.m_b) / total);
  f.beta_angle = std::atan(std::sqrt(m.m_b * total / (m.m_a * m.m_c)));
  return f;
}

SimCoords to_sim(const ChemCoords& c, const MassFactors& f,
                 const ScalingParams& s) {
  s.validate();
  const double denom = std::sqrt(s.m_tilde) * s.l;
  return {(f.a * c.q1 + f.b * c.q2 * f.cos_beta()) / denom,
          f.b * c.q2 * f.sin_beta() / denom};
}

ChemCoords chem_from_sim(const SimCoords& q, const MassFactors& f,
                         const ScalingParams& s) {
  const double num = std::sqrt(s.m_tilde) * s.l;
  const double q2 = num * q.q2 / (f.b * f.sin_beta());
  const double q1 = (num * q.q1 - f.b * q2 * f.cos_beta()) / f.a;
  return {q1, q2, 0.0};
}

LabPositions from_sim(const SimCoords& q, const MassTriple& masses,
                      const MassFactors& f, const ScalingParams& s,
                      double r_cm) {
  s.validate();
  const double root = s.l * std::sqrt(s.m_tilde);
  const double sb = f.sin_beta();
  const double cb = f.cos_beta();
  LabPositions x{};
  x.x_a = r_cm - f.a * root / masses.m_a * q.q1;
  x.x_b = r_cm + f.b * root * (cb / masses.m_c * q.q1 - sb / masses.m_b * q.q2);
  x.x_c = r_cm + f.b * root / masses.m_c * (cb * q.q1 + sb * q.q2);
  return x;
}

SimMomenta momentum_to_sim(double p_a, double p_b, double p_c,
                           const MassTriple& m, const MassFactors& f,
                           const ScalingParams& s) {
  s.validate();
  SimMomenta out{};
  out.p_cm = p_a + p_b + p_c;
  const double root = s.l * std::sqrt(s.m_tilde);
  out.p_q1 = root * f.a *
             (-(p_a / m.m_a) + (p_b + p_c) / (m.m_b + m.m_c));
  out.p_q2 = root * f.b * f.sin_beta() * (p_c / m.m_c - p_b / m.m_b);
  return out;
}

ScaledSurface::ScaledSurface(LepsSurface surface, MassFactors f,
                             ScalingParams s)
    : surface_(std::move(surface)), factors_(f), scaling_(s) {
  scaling_.validate();
}

ChemCoords ScaledSurface::chem_coords(double sim_q1, double sim_q2) const {
  return chem_from_sim({sim_q1, sim_q2}, factors_, scaling_);
}

double ScaledSurface::energy(double sim_q1, double sim_q2) const {
  const ChemCoords c = chem_coords(sim_q1, sim_q2);
  return scaling_.l * scaling_.l * surface_.energy(c.q1, c.q2);
}

double SimChannelGeometry::omega1() const { return 2.0 * pi * nu_tilde1; }
double SimChannelGeometry::omega2() const { return 2.0 * pi * nu_tilde2; }
double SimChannelGeometry::osc_len1() const {
  return std::sqrt(hbar / (m_tilde * omega1()));
}
double SimChannelGeometry::osc_len2() const {
  return std::sqrt(hbar / (m_tilde * omega2()));
}
double SimChannelGeometry::chi1(double sim_q1, double sim_q2) const {
  return sin_beta * sim_q1 - cos_beta * sim_q2;
}
double SimChannelGeometry::eta1(double sim_q1, double sim_q2) const {
  return cos_beta * sim_q1 + sin_beta * sim_q2;
}

SimChannelGeometry channel_geometry(const LepsSurface& surface,
                                    const MassTriple& masses,
                                    const ScalingParams& s) {
  s.validate();
  const MassFactors f = mass_factors(masses);
  const double sb = f.sin_beta();
  const double root = s.l * std::sqrt(s.m_tilde);
  const double l2 = s.l * s.l;
  const double l4 = l2 * l2;

  SimChannelGeometry g{};
  g.sin_beta = sb;
  g.cos_beta = f.cos_beta();
  g.m_tilde = s.m_tilde;
  g.chi10 = surface.ab().equilibrium_distance * f.a * sb / root;
  g.chi20 = surface.bc().equilibrium_distance * f.b * sb / root;
  g.k_tilde1 = surface.ab().force_constant() * s.m_tilde * l4 / (f.a * f.a * sb * sb);
  g.k_tilde2 = surface.bc().force_constant() * s.m_tilde * l4 / (f.b * f.b * sb * sb);

  // Frequencies via the diatomic frequencies; the direct
  // sqrt(K~/m~)/(2 pi) route must agree (asserted in tests).
  const double nu1 = harmonic_params(surface.ab()).frequency;
  const double nu2 = harmonic_params(surface.bc()).frequency;
  g.nu_tilde1 = l2 * std::sqrt(surface.ab().reduced_mass) / (f.a * sb) * nu1;
  g.nu_tilde2 = l2 * std::sqrt(surface.bc().reduced_mass) / (f.b * sb) * nu2;
  return g;
}

double solve_l(double target_nu_tilde, int channel, const LepsSurface& surface,
               const MassTriple& masses, double m_tilde) {
  if (!(target_nu_tilde > 0.0))
    throw validation_error("solve_l: target frequency must be > 0");
  if (channel != 1 && channel != 2)
    throw validation_error("solve_l: channel must be 1 or 2");
  if (!(m_tilde > 0.0)) throw validation_error("solve_l: m_tilde must be > 0");
  const MassFactors f = mass_factors(masses);
  const DiatomSpec& d = channel == 1 ? surface.ab() : surface.bc();
  const double factor = channel == 1 ? f.a : f.b;
  const double nu = harmonic_params(d).frequency;
  return std::sqrt(target_nu_tilde * factor * f.sin_beta() /
                   (std::sqrt(d.reduced_mass) * nu));
}

VelocityPair initial_velocity(double temperature, const MassTriple& m,
                              const MassFactors& f, const ScalingParams& s) {
  if (!(temperature >= 0.0))
    throw validation_error("initial_velocity: temperature must be >= 0");
  s.validate();
  const double v =
      f.a * s.l * std::sqrt(k_boltzmann * temperature / (s.m_tilde * m.m_a)) *
      (1.0 + std::sqrt(m.m_a / (m.m_b + m.m_c)));
  return {v, 0.0};
}

DesignReport design_report(const LepsSurface& surface, const MassTriple& masses,
                           double m_tilde, const DesignInput& input) {
  if (input.l.has_value() == input.target_nu_tilde.has_value())
    throw validation_error(
        "design_report: exactly one of l / target frequency must be given");
  const double l = input.l ? *input.l
                           : solve_l(*input.target_nu_tilde,
                                     input.target_channel, surface, masses,
                                     m_tilde);
  const ScalingParams s{m_tilde, l};
  s.validate();
  const MassFactors f = mass_factors(masses);
  const SimChannelGeometry g = channel_geometry(surface, masses, s);

  DesignReport r{};
  r.nu_tilde_1 = g.nu_tilde1;
  r.nu_tilde_2 = g.nu_tilde2;
  r.v_tilde_1 = surface.ab().dissociation_energy * l * l;
  r.v_tilde_2 = surface.bc().dissociation_energy * l * l;
  r.v_q1 = initial_velocity(input.temperature, masses, f, s).v_q1;
  const double root = l * std::sqrt(m_tilde);
  r.length_scale_1 = f.a / root;
  r.length_scale_2 = f.b / root;
  r.chi_10 = g.chi10;
  r.chi_20 = g.chi20;
  r.k_tilde_1 = g.k_tilde1;
  r.k_tilde_2 = g.k_tilde2;
  r.tau_scale = 1.0 / (l * l);
  r.l = l;
  r.m_tilde = m_tilde;
  return r;
}

}  // namespace reactwave
