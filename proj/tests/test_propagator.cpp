#include <doctest.h>

#include <cmath>

#include "reactwave/analysis.hpp"
#include "reactwave/constants.hpp"
#include "reactwave/propagator.hpp"
#include "test_helpers.hpp"

using namespace reactwave;
using constants::hbar;
using constants::pi;

namespace {

SimChannelGeometry li7_geom() {
  return channel_geometry(testing::fh2_surface(), testing::fh2_masses(),
                          testing::li7_scaling());
}

// Transverse harmonic channel of the reactant valley, uniform along Q1,
// clipped far outside the states of interest so large test steps stay within
// the phase guard.
std::vector<double> harmonic_raster(const Grid2D& g, const SimChannelGeometry& geom) {
  std::vector<double> v(g.size());
  const double clip = 10.0 * constants::hbar * geom.omega2();
  for (std::size_t i = 0; i < g.n1; ++i)
    for (std::size_t j = 0; j < g.n2; ++j) {
      const double d = g.x2(j) - geom.chi20;
      v[i * g.n2 + j] = std::min(0.5 * geom.k_tilde2 * d * d, clip);
    }
  return v;
}

double transverse_mode_population(const Wavefunction& psi,
                                  const SimChannelGeometry& geom, int n) {
  const Grid2D& g = psi.grid;
  double total = 0.0;
  for (std::size_t i = 0; i < g.n1; ++i) {
    cdouble c = 0.0;
    for (std::size_t j = 0; j < g.n2; ++j)
      c += ho_eigenfunction(n, g.x2(j) - geom.chi20, geom.osc_len2()) *
           psi.at(i, j);
    total += std::norm(c * g.dx2) * g.dx1;
  }
  return total;
}

}  // namespace

TEST_CASE("wavepacket initialization") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 30e-6, 0, 8e-6, 256, 64);
  WavePacketSpec spec;
  spec.center = 15e-6;
  spec.sigma = 2e-6;
  spec.velocity = -4.93e-3;
  Wavefunction psi = init_wavepacket(spec, grid, geom);

  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // spectral mean-momentum oracle
  Propagator prop(grid, std::vector<double>(grid.size(), 0.0), geom, {},
                  1e-7);
  CHECK(prop.mean_velocity(psi, Channel::reactant) ==
        doctest::Approx(spec.velocity).epsilon(1e-6));

  WavePacketSpec bad = spec;
  bad.center = 40e-6;
  CHECK_THROWS_AS(init_wavepacket(bad, grid, geom), validation_error);

  CapSpec cap;
  cap.width = 8e-6;
  cap.strength = 1e-30;
  cap.channel_halfwidth = 4e-6;
  WavePacketSpec inside = spec;
  inside.center = 27e-6;  // inside the reactant CAP strip
  CHECK_THROWS_AS(init_wavepacket(inside, grid, geom, cap), validation_error);

  // coarse transverse grid cannot resolve high states
  const Grid2D coarse = Grid2D::from_extents(0, 30e-6, 0, 16e-6, 256, 64);
  WavePacketSpec high = spec;
  high.n_transverse = 6;
  CHECK_THROWS_AS(init_wavepacket(high, coarse, geom), validation_error);
}

TEST_CASE("zero steps leave the state unchanged") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 20e-6, 0, 8e-6, 64, 64);
  WavePacketSpec spec;
  spec.center = 10e-6;
  spec.sigma = 1.5e-6;
  Wavefunction psi = init_wavepacket(spec, grid, geom);
  const auto before = psi.amp;
  Propagator prop(grid, harmonic_raster(grid, geom), geom, {},
                  Propagator::default_dt(geom));
  Schedule sched{Propagator::default_dt(geom), 0, 10};
  const RunResult r = propagate(prop, psi, sched);
  CHECK(psi.amp == before);
  CHECK(r.final_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm conserved to 1e-10 over 1e4 steps without CAP") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 20e-6, 0, 8e-6, 64, 64);
  WavePacketSpec spec;
  spec.center = 10e-6;
  spec.sigma = 1.5e-6;
  spec.velocity = 3e-3;
  Wavefunction psi = init_wavepacket(spec, grid, geom);
  Propagator prop(grid, harmonic_raster(grid, geom), geom, {},
                  Propagator::default_dt(geom));
  for (int s = 0; s < 10000; ++s) prop.step(psi);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
}

TEST_CASE("free gaussian dispersion matches the closed form") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 60e-6, 0, 10e-6, 256, 64);
  const double m = geom.m_tilde;

  for (auto [sigma, v] : {std::pair{1.5e-6, 0.0}, std::pair{2.0e-6, 3e-3},
                          std::pair{1.0e-6, -2e-3}}) {
    WavePacketSpec spec;
    spec.center = 30e-6;
    spec.sigma = sigma;
    spec.velocity = v;
    Wavefunction psi = init_wavepacket(spec, grid, geom);
    const double dt = 2e-7;
    Propagator prop(grid, std::vector<double>(grid.size(), 0.0), geom, {}, dt);
    const double t_final = 0.35 * 2.0 * m * sigma * sigma / hbar * 2.0;
    const long steps = std::lround(t_final / dt);
    for (long s = 0; s < steps; ++s) prop.step(psi);
    // measured longitudinal width
    double w = 0.0, mean = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < grid.n1; ++i)
      for (std::size_t j = 0; j < grid.n2; ++j) {
        const double p = std::norm(psi.at(i, j));
        mean += p * grid.x1(i);
        nrm += p;
      }
    mean /= nrm;
    for (std::size_t i = 0; i < grid.n1; ++i)
      for (std::size_t j = 0; j < grid.n2; ++j)
        w += std::norm(psi.at(i, j)) * (grid.x1(i) - mean) * (grid.x1(i) - mean);
    w = std::sqrt(w / nrm);
    const double t = psi.time;
    const double expected =
        sigma * std::sqrt(1.0 + std::pow(hbar * t / (2.0 * m * sigma * sigma), 2));
    CHECK(w == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("transverse eigenstates are stationary over 10 periods") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 20e-6, 0, 8e-6, 64, 128);
  const double period = 1.0 / geom.nu_tilde2;
  const double dt = period / 500.0;
  for (int n : {0, 1, 2}) {
    WavePacketSpec spec;
    spec.center = 10e-6;
    spec.sigma = 2.5e-6;
    spec.n_transverse = n;
    Wavefunction psi = init_wavepacket(spec, grid, geom);
    Propagator prop(grid, harmonic_raster(grid, geom), geom, {}, dt);
    for (int s = 0; s < 5000; ++s) prop.step(psi);
    CHECK(transverse_mode_population(psi, geom, n) > 0.999);
  }
}

TEST_CASE("ehrenfest oscillation at the design frequency") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 20e-6, 0, 8e-6, 64, 128);
  const double period = 1.0 / geom.nu_tilde2;
  const double dt = period / 1000.0;

  // displace the transverse center by one oscillator length
  WavePacketSpec spec;
  spec.center = 10e-6;
  spec.sigma = 2.5e-6;
  Wavefunction psi = init_wavepacket(spec, grid, geom);
  const double shift = geom.osc_len2();
  Wavefunction displaced(grid);
  for (std::size_t i = 0; i < grid.n1; ++i)
    for (std::size_t j = 0; j < grid.n2; ++j) {
      const double x2 = grid.x2(j) - shift;
      const double d = x2 - geom.chi20;
      const double dl = grid.x1(i) - spec.center;
      displaced.at(i, j) =
          std::exp(-dl * dl / (4 * spec.sigma * spec.sigma)) *
          ho_eigenfunction(0, d, geom.osc_len2());
    }
  displaced.normalize();
  Propagator prop(grid, harmonic_raster(grid, geom), geom, {}, dt);

  auto mean_q2 = [&](const Wavefunction& w) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.n1; ++i)
      for (std::size_t j = 0; j < grid.n2; ++j) {
        const double p = std::norm(w.at(i, j));
        num += p * grid.x2(j);
        den += p;
      }
    return num / den;
  };

  // find two successive downward crossings of the equilibrium
  double prev = mean_q2(displaced) - geom.chi20;
  double t_first = -1.0, t_second = -1.0;
  for (int s = 1; s <= 2200; ++s) {
    prop.step(displaced);
    const double cur = mean_q2(displaced) - geom.chi20;
    if (prev > 0 && cur <= 0) {
      const double frac = prev / (prev - cur);
      const double t = (double(s) - 1.0 + frac) * dt;
      if (t_first < 0) t_first = t;
      else if (t_second < 0) { t_second = t; break; }
    }
    prev = cur;
  }
  REQUIRE(t_second > 0);
  const double measured_period = t_second - t_first;
  CHECK(measured_period == doctest::Approx(period).epsilon(0.005));
  // the design number itself
  CHECK(1.0 / measured_period == doctest::Approx(5.66e3).epsilon(0.01));
}

TEST_CASE("energy expectation is conserved before flux reaches the CAP") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 20e-6, 0, 8e-6, 64, 64);
  const double period = 1.0 / geom.nu_tilde2;
  WavePacketSpec spec;
  spec.center = 10e-6;
  spec.sigma = 2.5e-6;
  spec.velocity = 0.5e-3;
  Wavefunction psi = init_wavepacket(spec, grid, geom);
  Propagator prop(grid, harmonic_raster(grid, geom), geom, {}, period / 20000.0);
  const double e0 = prop.energy_expectation(psi);
  double max_drift = 0.0;
  for (int s = 0; s < 400; ++s) {
    prop.step(psi);
    if (s % 40 == 0)
      max_drift = std::max(max_drift,
                           std::abs(prop.energy_expectation(psi) - e0));
  }
  CHECK(max_drift / std::abs(e0) < 1e-8);
}

TEST_CASE("cap absorbs and the books balance") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 40e-6, 0, 20e-6, 256, 128);
  CapSpec cap;
  cap.width = 14e-6;
  cap.strength = 4e-30;
  cap.channel_halfwidth = 4e-6;
  WavePacketSpec spec;
  spec.center = 12e-6;
  spec.sigma = 2e-6;
  spec.velocity = 25e-3;  // fast packet into the reactant-side CAP
  Wavefunction psi = init_wavepacket(spec, grid, geom, cap);
  Propagator prop(grid, harmonic_raster(grid, geom), geom, cap,
                  Propagator::default_dt(geom));
  Schedule sched{Propagator::default_dt(geom), 12000, 0};
  const RunResult r = propagate(prop, psi, sched);
  CHECK(r.ledger.absorbed_reactant > 0.99);
  CHECK(r.ledger.absorbed_product < 1e-6);
  CHECK(std::abs(r.final_norm + r.ledger.absorbed_reactant +
                 r.ledger.absorbed_product - 1.0) < 1e-6);
}

TEST_CASE("phase wrap guard rejects oversized dt") {
  const SimChannelGeometry geom = li7_geom();
  const Grid2D grid = Grid2D::from_extents(0, 20e-6, 0, 8e-6, 64, 64);
  std::vector<double> v(grid.size(), 8e-29);
  CHECK_THROWS_AS(Propagator(grid, v, geom, {}, 1e-6), validation_error);
}
