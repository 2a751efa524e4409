#include <doctest.h>

#include <cmath>
#include <random>

#include "reactwave/constants.hpp"
#include "reactwave/frames.hpp"
#include "test_helpers.hpp"

using namespace reactwave;
using testing::kAngstrom;

TEST_CASE("mass factors for F+H2") {
  const MassFactors f = mass_factors(testing::fh2_masses());
  CHECK(f.a == doctest::Approx(5.48e-14).epsilon(0.005));
  CHECK(f.b == doctest::Approx(3.98e-14).epsilon(0.005));
  CHECK(f.beta_angle * 180 / constants::pi == doctest::Approx(46.45).epsilon(0.1 / 46.45));
}

TEST_CASE("mass factor symmetries") {
  const MassFactors eq = mass_factors({2e-26, 2e-26, 2e-26});
  CHECK(std::tan(eq.beta_angle) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(eq.a == doctest::Approx(eq.b).epsilon(1e-14));

  const MassFactors ac = mass_factors({3e-26, 0.7e-26, 3e-26});
  CHECK(ac.a == doctest::Approx(ac.b).epsilon(1e-14));
  CHECK(ac.beta_angle > 0);
  CHECK(ac.beta_angle < constants::pi / 2);
}

TEST_CASE("to_sim displacement checkpoint") {
  const MassFactors f = mass_factors(testing::fh2_masses());
  const ScalingParams s = testing::li7_scaling();
  const SimCoords a = to_sim({2.0 * kAngstrom, 0.742 * kAngstrom}, f, s);
  const SimCoords b = to_sim({3.0 * kAngstrom, 0.742 * kAngstrom}, f, s);
  CHECK(b.q1 - a.q1 == doctest::Approx(7.8e-6).epsilon(0.01));
  const SimCoords zero = to_sim({0.0, 0.0}, f, s);
  CHECK(zero.q1 == 0.0);
  CHECK(zero.q2 == 0.0);
}

TEST_CASE("to_sim and from_sim invert each other") {
  const MassTriple m = testing::fh2_masses();
  const MassFactors f = mass_factors(m);
  const ScalingParams s = testing::li7_scaling();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const ChemCoords c{u(rng) * kAngstrom, u(rng) * kAngstrom, u(rng) * kAngstrom};
    const SimCoords q = to_sim(c, f, s);
    const LabPositions x = from_sim(q, m, f, s, c.r_cm);
    CHECK(x.x_b - x.x_a == doctest::Approx(c.q1).epsilon(1e-12));
    CHECK(x.x_c - x.x_b == doctest::Approx(c.q2).epsilon(1e-12));
    const double cm = (m.m_a * x.x_a + m.m_b * x.x_b + m.m_c * x.x_c) / m.total();
    CHECK(cm == doctest::Approx(c.r_cm).epsilon(1e-12));
    const SimCoords q2 = to_sim(chem_from_sim(q, f, s), f, s);
    CHECK(q2.q1 == doctest::Approx(q.q1).epsilon(1e-12));
    CHECK(q2.q2 == doctest::Approx(q.q2).epsilon(1e-12));
  }
  const LabPositions origin = from_sim({0.0, 0.0}, m, f, s, 0.0);
  CHECK(origin.x_a == 0.0);
  CHECK(origin.x_b == 0.0);
  CHECK(origin.x_c == 0.0);
}

TEST_CASE("momenta: rigid translation and kinetic energy identity") {
  const MassTriple m = testing::fh2_masses();
  const MassFactors f = mass_factors(m);
  const ScalingParams s = testing::li7_scaling();

  const SimMomenta zero = momentum_to_sim(0, 0, 0, m, f, s);
  CHECK(zero.p_cm == 0.0);
  CHECK(zero.p_q1 == 0.0);
  CHECK(zero.p_q2 == 0.0);

  const double v = 17.0;
  const SimMomenta rigid = momentum_to_sim(m.m_a * v, m.m_b * v, m.m_c * v, m, f, s);
  CHECK(rigid.p_cm == doctest::Approx(m.total() * v).epsilon(1e-14));
  CHECK(std::abs(rigid.p_q1) < 1e-12 * std::abs(rigid.p_cm));
  CHECK(std::abs(rigid.p_q2) < 1e-12 * std::abs(rigid.p_cm));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1e-24);
  for (int i = 0; i < 1000; ++i) {
    const double pa = g(rng), pb = g(rng), pc = g(rng);
    const SimMomenta p = momentum_to_sim(pa, pb, pc, m, f, s);
    const double t_lab = pa * pa / (2 * m.m_a) + pb * pb / (2 * m.m_b) +
                         pc * pc / (2 * m.m_c);
    const double t_sim = p.p_cm * p.p_cm / (2 * m.total()) +
                         (p.p_q1 * p.p_q1 + p.p_q2 * p.p_q2) /
                             (2 * s.m_tilde * s.l * s.l);
    CHECK(t_sim == doctest::Approx(t_lab).epsilon(1e-12));
  }
}

TEST_CASE("scaled surface depth checkpoints") {
  const ScaledSurface vs(testing::fh2_surface(), mass_factors(testing::fh2_masses()),
                         testing::li7_scaling());
  const SimChannelGeometry g = channel_geometry(
      testing::fh2_surface(), testing::fh2_masses(), testing::li7_scaling());
  // bottom of the reactant valley far out: -D2 l^2 = -2.4 uK
  const SimCoords far = to_sim({40 * kAngstrom, 0.742 * kAngstrom},
                               mass_factors(testing::fh2_masses()),
                               testing::li7_scaling());
  const double depth = -vs.energy(far.q1, far.q2);
  CHECK(depth * units::joule_to_microkelvin == doctest::Approx(2.4).epsilon(0.02));
  CHECK(depth == doctest::Approx(3.26e-29).epsilon(0.01));
  // product valley: -D1 l^2 = -3 uK
  const double l = testing::li7_scaling().l;
  CHECK(9.609e-19 * l * l * units::joule_to_microkelvin == doctest::Approx(3.0).epsilon(0.03));
  CHECK(g.chi20 > 0);
}

TEST_CASE("channel frequencies reproduce the 7Li design") {
  const SimChannelGeometry g = channel_geometry(
      testing::fh2_surface(), testing::fh2_masses(), testing::li7_scaling());
  CHECK(g.nu_tilde2 == doctest::Approx(5.66e3).epsilon(0.01));
  CHECK(g.nu_tilde1 == doctest::Approx(5.34e3).epsilon(0.01));
  // two algebraically equivalent routes
  const double via_k1 = std::sqrt(g.k_tilde1 / g.m_tilde) / (2 * constants::pi);
  const double via_k2 = std::sqrt(g.k_tilde2 / g.m_tilde) / (2 * constants::pi);
  CHECK(via_k1 == doctest::Approx(g.nu_tilde1).epsilon(1e-10));
  CHECK(via_k2 == doctest::Approx(g.nu_tilde2).epsilon(1e-10));
}

TEST_CASE("chi1 is a rotation") {
  const SimChannelGeometry g = channel_geometry(
      testing::fh2_surface(), testing::fh2_masses(), testing::li7_scaling());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e-5, 1e-5);
  for (int i = 0; i < 1000; ++i) {
    const double q1 = u(rng), q2 = u(rng);
    const double chi = g.chi1(q1, q2);
    const double eta = g.eta1(q1, q2);
    CHECK(chi * chi + eta * eta == doctest::Approx(q1 * q1 + q2 * q2).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic harmonic energies agree between frames") {
  const LepsSurface surf = testing::fh2_surface();
  const MassTriple m = testing::fh2_masses();
  const MassFactors f = mass_factors(m);
  const ScalingParams s = testing::li7_scaling();
  const SimChannelGeometry g = channel_geometry(surf, m, s);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int i = 0; i < 200; ++i) {
    // reactant channel: displace q2 around q20 at large q1
    const double dq2 = u(rng) * kAngstrom;
    const double k2 = surf.bc().force_constant();
    const double e_chem = 0.5 * k2 * dq2 * dq2 * s.l * s.l;
    const SimCoords q = to_sim({35 * kAngstrom, surf.bc().equilibrium_distance + dq2}, f, s);
    const double e_sim = 0.5 * g.k_tilde2 * (q.q2 - g.chi20) * (q.q2 - g.chi20);
    CHECK(e_sim == doctest::Approx(e_chem).epsilon(1e-10));
    // product channel
    const double dq1 = u(rng) * kAngstrom;
    const double k1 = surf.ab().force_constant();
    const double e_chem1 = 0.5 * k1 * dq1 * dq1 * s.l * s.l;
    const SimCoords qp = to_sim({surf.ab().equilibrium_distance + dq1, 35 * kAngstrom}, f, s);
    const double chi = g.chi1(qp.q1, qp.q2);
    const double e_sim1 = 0.5 * g.k_tilde1 * (chi - g.chi10) * (chi - g.chi10);
    CHECK(e_sim1 == doctest::Approx(e_chem1).epsilon(1e-10));
  }
}

TEST_CASE("solve_l inverts the frequency map") {
  const LepsSurface surf = testing::fh2_surface();
  const MassTriple m = testing::fh2_masses();
  const double mt = testing::li7_scaling().m_tilde;
  const double l = solve_l(5.657e3, 2, surf, m, mt);
  CHECK(l == doctest::Approx(6.55e-6).epsilon(0.005));
  // power law: 4x frequency -> 2x l
  CHECK(solve_l(4 * 5.657e3, 2, surf, m, mt) == doctest::Approx(2 * l).epsilon(1e-12));
  // round trip
  const SimChannelGeometry g = channel_geometry(surf, m, {mt, l});
  CHECK(g.nu_tilde2 == doctest::Approx(5.657e3).epsilon(1e-12));
  CHECK_THROWS_AS(solve_l(-1.0, 2, surf, m, mt), validation_error);
}

TEST_CASE("thermal launch velocity") {
  const MassTriple m = testing::fh2_masses();
  const MassFactors f = mass_factors(m);
  const ScalingParams s = testing::li7_scaling();
  const VelocityPair v = initial_velocity(298.0, m, f, s);
  CHECK(v.v_q1 * 1e3 == doctest::Approx(5.0).epsilon(0.02));
  CHECK(v.v_q2 == 0.0);
  CHECK(initial_velocity(0.0, m, f, s).v_q1 == 0.0);
  const VelocityPair v4 = initial_velocity(4 * 298.0, m, f, s);
  CHECK(v4.v_q1 == doctest::Approx(2 * v.v_q1).epsilon(1e-12));
  CHECK_THROWS_AS(initial_velocity(-1.0, m, f, s), validation_error);
}

TEST_CASE("design report aggregates the paper checkpoint set") {
  DesignInput in;
  in.l = 6.55e-6;
  in.temperature = 298.0;
  const DesignReport r = design_report(testing::fh2_surface(), testing::fh2_masses(),
                                       1.1526e-26, in);
  CHECK(r.nu_tilde_2 == doctest::Approx(5.66e3).epsilon(0.01));
  CHECK(r.nu_tilde_1 == doctest::Approx(5.34e3).epsilon(0.01));
  CHECK(r.v_tilde_2 * units::joule_to_microkelvin == doctest::Approx(2.4).epsilon(0.02));
  CHECK(r.v_tilde_1 * units::joule_to_microkelvin == doctest::Approx(3.0).epsilon(0.03));
  CHECK(r.v_q1 * 1e3 == doctest::Approx(5.0).epsilon(0.02));
  CHECK(r.tau_scale == doctest::Approx(2.33e10).epsilon(0.002));
  CHECK(r.length_scale_1 * kAngstrom == doctest::Approx(7.8e-6).epsilon(0.01));

  DesignInput both = in;
  both.target_nu_tilde = 5.657e3;
  CHECK_THROWS_AS(design_report(testing::fh2_surface(), testing::fh2_masses(),
                                1.1526e-26, both),
                  validation_error);

  // identity reaction: equal masses, identical diatoms
  const MassTriple eq{2e-27, 2e-27, 2e-27};
  const LepsSurface sym = testing::h3_surface();
  DesignInput in2;
  in2.l = 1e-5;
  const DesignReport r2 = design_report(sym, eq, 1.1526e-26, in2);
  CHECK(r2.nu_tilde_1 == doctest::Approx(r2.nu_tilde_2).epsilon(1e-12));
  CHECK(r2.v_tilde_1 == doctest::Approx(r2.v_tilde_2).epsilon(1e-14));
}
