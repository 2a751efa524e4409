#include <doctest.h>

#include <random>

#include "reactwave/constants.hpp"

using namespace reactwave;

TEST_CASE("energy_to_temperature checkpoints") {
  CHECK(units::energy_to_temperature(0.0) == 0.0);
  // Scaled reactant valley depth D2 l^2 for the F+H2 / 7Li design: about 2.4 uK
  const double depth = 7.608e-19 * 6.55e-6 * 6.55e-6;
  CHECK(units::energy_to_temperature(depth) == doctest::Approx(2.36e-6).epsilon(0.01));
  CHECK(units::energy_to_temperature(constants::k_boltzmann) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(units::energy_to_temperature(-1e-30), validation_error);
}

TEST_CASE("conversion round trips and linearity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-30, 1e3);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    const double back = x * units::angstrom_to_m * units::m_to_angstrom;
    CHECK(back == doctest::Approx(x).epsilon(1e-14));
    const double e = x * units::joule_to_microkelvin * units::microkelvin_to_joule;
    CHECK(e == doctest::Approx(x).epsilon(1e-14));
    // linearity f(a x) = a f(x)
    const double a = u(rng);
    CHECK(units::energy_to_temperature(a * x) ==
          doctest::Approx(a * units::energy_to_temperature(x)).epsilon(1e-12));
  }
}
