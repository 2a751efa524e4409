#include <doctest.h>

#include <string>

#include "reactwave/config.hpp"

using namespace reactwave;

namespace {

const char* kMinimalReaction = R"(
reaction.m_a = 3.15e-26 kg
reaction.m_b = 1.66e-27 kg
reaction.m_c = 1.66e-27 kg
reaction.delta = 0.164
reaction.ab.d = 9.609e-19 J
reaction.ab.beta = 2.242 1/angstrom
reaction.ab.q0 = 0.917 angstrom
reaction.bc.d = 7.608e-19 J
reaction.bc.beta = 1.942 1/angstrom
reaction.bc.q0 = 0.742 angstrom
reaction.ac.d = 9.609e-19 J
reaction.ac.beta = 2.242 1/angstrom
reaction.ac.q0 = 0.917 angstrom
)";

}  // namespace

TEST_CASE("minimal reaction block parses with units applied") {
  const RunConfig cfg = parse_config_text(kMinimalReaction, "mem.cfg");
  CHECK(cfg.has_reaction);
  CHECK(!cfg.has_simulator);
  CHECK(cfg.ab.equilibrium_distance == doctest::Approx(0.917e-10).epsilon(1e-14));
  CHECK(cfg.bc.beta_morse == doctest::Approx(1.942e10).epsilon(1e-14));
  CHECK(cfg.sato_delta == 0.164);
  // reduced masses derived from the mass triple
  CHECK(cfg.bc.reduced_mass == doctest::Approx(8.3e-28).epsilon(1e-12));
}

TEST_CASE("unknown keys are rejected with a line number") {
  const std::string text = std::string(kMinimalReaction) + "reaction.deltaa = 1\n";
  try {
    parse_config_text(text, "typo.cfg");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("typo.cfg:") != std::string::npos);
    CHECK(msg.find("unknown key 'reaction.deltaa'") != std::string::npos);
  }
}

TEST_CASE("bare numbers for dimensioned fields are rejected") {
  std::string text = kMinimalReaction;
  const auto pos = text.find("0.917 angstrom");
  text.replace(pos, 14, "0.917");
  CHECK_THROWS_AS(parse_config_text(text, "bare.cfg"), validation_error);
}

TEST_CASE("wrong-dimension units are rejected") {
  std::string text = kMinimalReaction;
  const auto pos = text.find("0.917 angstrom");
  text.replace(pos, 14, "0.917 kHz");
  try {
    parse_config_text(text, "dim.cfg");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("not a length unit") != std::string::npos);
  }
}

TEST_CASE("duplicate keys are rejected") {
  const std::string text = std::string(kMinimalReaction) + "reaction.delta = 0.2\n";
  CHECK_THROWS_AS(parse_config_text(text, "dup.cfg"), validation_error);
}

TEST_CASE("partial blocks name the missing key") {
  const std::string text = "grid.q1_max = 50 um\n";
  try {
    parse_config_text(text, "part.cfg");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("grid.q2_max") != std::string::npos);
  }
}

TEST_CASE("simulator block needs exactly one of l / target_nu") {
  const std::string base = std::string(kMinimalReaction) +
                           "simulator.m_tilde = 1.1526e-26 kg\n";
  CHECK_THROWS_AS(parse_config_text(base, "s.cfg"), validation_error);
  CHECK_NOTHROW(parse_config_text(base + "simulator.l = 6.55e-6\n", "s.cfg"));
  CHECK_NOTHROW(
      parse_config_text(base + "simulator.target_nu = 5.657 kHz\n", "s.cfg"));
  CHECK_THROWS_AS(
      parse_config_text(base + "simulator.l = 6.55e-6\nsimulator.target_nu = 5.657 kHz\n",
                        "s.cfg"),
      validation_error);
}

TEST_CASE("config round trip is the identity") {
  const std::string full = std::string(kMinimalReaction) + R"(
simulator.m_tilde = 1.1526e-26 kg
simulator.l = 6.55e-6
simulator.temperature = 298 K
grid.q1_max = 50 um
grid.q2_max = 40 um
grid.n1 = 512
grid.n2 = 256
packet.channel = reactant
packet.center = 21 um
packet.sigma = 2 um
packet.velocity = auto
packet.n = 0
cap.width = 22.5 um
cap.strength = 7.5e-31 J
cap.power = 3
cap.halfwidth = 6 um
schedule.dt = auto
schedule.n_steps = 28000
schedule.stride = 4000
analysis.reactant_line = 14 um
analysis.product_line = 22 um
analysis.basis = harmonic
analysis.n_max = 6
analysis.flux_stride = 8
output.dir = runs/demo
)";
  const RunConfig a = parse_config_text(full, "full.cfg");
  const RunConfig b = parse_config_text(a.to_text(), "roundtrip.cfg");
  CHECK(a.to_text() == b.to_text());
  CHECK(b.grid_n1 == 512);
  CHECK(b.packet_velocity_auto);
  CHECK(b.dt_auto);
  CHECK(b.cap.channel_halfwidth == doctest::Approx(6e-6).epsilon(1e-14));
  CHECK(b.basis.n_states == 7);
  CHECK(b.output_dir == "runs/demo");
  CHECK(b.scaling().l == doctest::Approx(6.55e-6).epsilon(1e-14));
}

TEST_CASE("temperature accepts microkelvin, energy accepts microkelvin") {
  const std::string text =
      std::string(kMinimalReaction) +
      "simulator.m_tilde = 1.1526e-26 kg\nsimulator.l = 1e-5\n"
      "simulator.temperature = 500 uK\n";
  const RunConfig cfg = parse_config_text(text, "t.cfg");
  CHECK(cfg.temperature == doctest::Approx(5e-4).epsilon(1e-12));
}

TEST_CASE("require_blocks names the missing block") {
  const RunConfig cfg = parse_config_text(kMinimalReaction, "m.cfg");
  try {
    require_blocks(cfg, {"reaction", "simulator"});
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("simulator") != std::string::npos);
  }
}
