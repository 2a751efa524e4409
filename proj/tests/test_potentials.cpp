#include <doctest.h>

#include <cmath>
#include <random>

#include "reactwave/potentials.hpp"
#include "test_helpers.hpp"

using namespace reactwave;
using testing::kAngstrom;

TEST_CASE("morse energy checkpoints") {
  const DiatomSpec hf = testing::hf_spec();
  CHECK(morse_energy(hf, hf.equilibrium_distance) == 0.0);
  CHECK(morse_energy(hf, 1000 * kAngstrom) == doctest::Approx(9.609e-19).epsilon(1e-9));
  // frozen closed-form values at q0 + 0.1 angstrom
  CHECK(morse_energy(testing::hh_spec(), (0.742 + 0.1) * kAngstrom) ==
        doctest::Approx(2.3702460970886315e-20).epsilon(1e-12));
  CHECK(morse_energy(hf, (0.917 + 0.1) * kAngstrom) ==
        doctest::Approx(3.8761359402818676e-20).epsilon(1e-12));
  CHECK_THROWS_AS(morse_energy(hf, std::nan("")), validation_error);
}

TEST_CASE("harmonic params checkpoints") {
  const HarmonicParams hf = harmonic_params(testing::hf_spec());
  CHECK(hf.force_constant == doctest::Approx(966.0).epsilon(0.005));
  CHECK(hf.frequency == doctest::Approx(1.246e14).epsilon(0.005));
  const HarmonicParams hh = harmonic_params(testing::hh_spec());
  CHECK(hh.force_constant == doctest::Approx(573.85).epsilon(0.005));
  CHECK(hh.frequency == doctest::Approx(1.32e14).epsilon(0.01));

  DiatomSpec flat = testing::hh_spec();
  flat.dissociation_energy = 0.0;
  const HarmonicParams fp = harmonic_params(flat);
  CHECK(fp.force_constant == 0.0);
  CHECK(fp.frequency == 0.0);
}

TEST_CASE("morse matches harmonic expansion near the minimum") {
  const DiatomSpec hh = testing::hh_spec();
  const double k = hh.force_constant();
  // fit quadratic coefficient over +-0.01 angstrom
  const double d = 0.01 * kAngstrom;
  double num = 0, den = 0;
  for (int i = -10; i <= 10; ++i) {
    if (i == 0) continue;
    const double dq = i * d / 10;
    num += morse_energy(hh, hh.equilibrium_distance + dq) * dq * dq;
    den += dq * dq * dq * dq;
  }
  CHECK(num / den == doctest::Approx(0.5 * k).epsilon(0.01));
}

TEST_CASE("leps reduces to morse in the asymptotic channels") {
  const LepsSurface s = testing::fh2_surface();
  const double d2 = s.bc().dissociation_energy;
  const double far = 30 * kAngstrom;

  const double c_inf = s.energy(far, far) - morse_energy(s.bc(), far);
  const double q20 = s.bc().equilibrium_distance;
  for (int i = 0; i < 50; ++i) {
    const double q2 = q20 - 0.5 * kAngstrom + i * (2.0 * kAngstrom / 49);
    const double diff = s.energy(far, q2) - (morse_energy(s.bc(), q2) + c_inf);
    CHECK(std::abs(diff) < 1e-3 * d2);
  }
  // product channel
  const double d1 = s.ab().dissociation_energy;
  const double c_inf1 = s.energy(far, far) - morse_energy(s.ab(), far);
  const double q10 = s.ab().equilibrium_distance;
  for (int i = 0; i < 50; ++i) {
    const double q1 = q10 - 0.5 * kAngstrom + i * (2.0 * kAngstrom / 49);
    const double diff = s.energy(q1, far) - (morse_energy(s.ab(), q1) + c_inf1);
    CHECK(std::abs(diff) < 1e-3 * d1);
  }
  // valley floors sit at -D
  CHECK(s.energy(far, q20) == doctest::Approx(-d2).epsilon(1e-9));
  CHECK(s.energy(q10, far) == doctest::Approx(-d1).epsilon(1e-9));
}

TEST_CASE("exchange symmetry for A = C") {
  const LepsSurface s = testing::h3_surface();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.45, 4.5);
  for (int i = 0; i < 1000; ++i) {
    const double q1 = u(rng) * kAngstrom;
    const double q2 = u(rng) * kAngstrom;
    const double va = s.energy(q1, q2);
    const double vb = s.energy(q2, q1);
    CHECK(va == doctest::Approx(vb).epsilon(1e-14));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  const LepsSurface s = testing::fh2_surface();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.5, 4.0);
  const double h = 1e-6 * kAngstrom;
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const double q1 = u(rng) * kAngstrom;
    const double q2 = u(rng) * kAngstrom;
    const auto g = s.gradient(q1, q2);
    const double g1 = (s.energy(q1 + h, q2) - s.energy(q1 - h, q2)) / (2 * h);
    const double g2 = (s.energy(q1, q2 + h) - s.energy(q1, q2 - h)) / (2 * h);
    const double scale = std::max({std::abs(g1), std::abs(g2),
                                   1e-6 * s.bc().dissociation_energy / kAngstrom});
    CHECK(std::abs(g[0] - g1) < 1e-6 * scale);
    CHECK(std::abs(g[1] - g2) < 1e-6 * scale);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("analytic hessian matches differenced gradient and is symmetric") {
  const LepsSurface s = testing::fh2_surface();
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.5, 3.5);
  const double h = 1e-5 * kAngstrom;
  for (int i = 0; i < 200; ++i) {
    const double q1 = u(rng) * kAngstrom;
    const double q2 = u(rng) * kAngstrom;
    const auto hess = s.hessian(q1, q2);
    CHECK(hess[1] == hess[2]);
    const auto gp1 = s.gradient(q1 + h, q2);
    const auto gm1 = s.gradient(q1 - h, q2);
    const auto gp2 = s.gradient(q1, q2 + h);
    const auto gm2 = s.gradient(q1, q2 - h);
    const double fd[4] = {(gp1[0] - gm1[0]) / (2 * h), (gp1[1] - gm1[1]) / (2 * h),
                          (gp2[0] - gm2[0]) / (2 * h), (gp2[1] - gm2[1]) / (2 * h)};
    double scale = 0;
    for (double v : fd) scale = std::max(scale, std::abs(v));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(hess[k] - fd[k]) < 1e-5 * scale);
  }
}

TEST_CASE("gradient is rejected at a radicand cusp") {
  // three identical pairs with the third equilibrium at q10 + q20 make all
  // exchange integrals equal at (q10, q20): the radicand vanishes exactly
  const DiatomSpec hh = testing::hh_spec();
  DiatomSpec far_pair = hh;
  far_pair.equilibrium_distance = 2.0 * hh.equilibrium_distance;
  const LepsSurface cusp{hh, hh, far_pair, 0.1};
  const double q0 = hh.equilibrium_distance;
  CHECK_NOTHROW(cusp.energy(q0, q0));  // clamped to zero, still evaluates
  CHECK_THROWS_AS(cusp.gradient(q0, q0), numerical_error);
  CHECK_THROWS_AS(cusp.hessian(q0, q0), numerical_error);
  // slightly off the degenerate point the derivatives exist again
  CHECK_NOTHROW(cusp.gradient(q0 * 1.2, q0 * 0.9));
}

TEST_CASE("leps input validation") {
  const LepsSurface s = testing::fh2_surface();
  CHECK_THROWS_AS(s.energy(std::nan(""), 1e-10), validation_error);
  CHECK_THROWS_AS((LepsSurface{testing::hf_spec(), testing::hh_spec(),
                               testing::hf_spec(), -1.0}),
                  validation_error);
  DiatomSpec bad = testing::hf_spec();
  bad.beta_morse = -1.0;
  CHECK_THROWS_AS((LepsSurface{bad, testing::hh_spec(), testing::hf_spec(), 0.1}),
                  validation_error);
}
