#pragma once

#include <map>
#include <optional>
#include <string>

#include "reactwave/analysis.hpp"
#include "reactwave/frames.hpp"
#include "reactwave/grid.hpp"
#include "reactwave/propagator.hpp"

namespace reactwave {

// Flat INI-style configuration with dotted section prefixes and mandatory
// unit suffixes on dimensioned values:
//
//   reaction.bc.q0 = 0.742 angstrom
//   simulator.l    = 6.55e-6
//
// '#' starts a comment. Unknown keys, missing units, wrong-dimension units
// and bare numbers for dimensioned fields are all hard errors with line
// numbers.
struct RunConfig {
  // reaction block
  MassTriple masses{};
  DiatomSpec ab{}, bc{}, ac{};
  double sato_delta = 0.0;

  // simulator block
  double m_tilde = 0.0;
  std::optional<double> l;
  std::optional<double> target_nu_tilde;  // Hz
  int target_channel = 2;
  double temperature = 298.0;  // K

  // grid block
  double grid_q1_min = 0.0, grid_q1_max = 0.0;  // m
  double grid_q2_min = 0.0, grid_q2_max = 0.0;  // m
  std::size_t grid_n1 = 0, grid_n2 = 0;

  // packet block
  WavePacketSpec packet{};
  bool packet_velocity_auto = false;  // velocity from the thermal estimate

  // cap block
  CapSpec cap{};

  // schedule block
  Schedule schedule{};
  bool dt_auto = false;

  // analysis block
  double reactant_line_q1 = 0.0;     // m
  double product_line_eta = 0.0;     // m
  BasisSpec basis{};
  long flux_stride = 8;
  double probe_halfwidth = 0.0;      // m; 0 selects 8 oscillator lengths

  // output block
  std::string output_dir;

  // presence flags for per-command validation
  bool has_reaction = false, has_simulator = false, has_grid = false,
       has_packet = false, has_cap = false, has_schedule = false,
       has_analysis = false;

  LepsSurface surface() const;
  ScalingParams scaling() const;  // resolves l via solve_l when needed
  std::string to_text() const;    // round-trippable serialization
};

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<memory>");
RunConfig parse_config_file(const std::string& path);

// Per-command block requirements ("design" needs reaction+simulator, ...).
void require_blocks(const RunConfig& config, std::initializer_list<const char*> blocks);

}  // namespace reactwave
