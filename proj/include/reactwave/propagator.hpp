#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "reactwave/fft.hpp"
#include "reactwave/frames.hpp"
#include "reactwave/grid.hpp"

namespace reactwave {

enum class Channel { reactant, product };

// Initial state: Gaussian along the channel axis times a transverse harmonic
// eigenstate of the channel. center/velocity refer to Q1 for the reactant
// channel and to eta_1 for the product channel; positive velocity points
// toward increasing coordinate.
struct WavePacketSpec {
  Channel channel = Channel::reactant;
  double center = 0.0;    // m
  double sigma = 0.0;     // m
  double velocity = 0.0;  // m/s
  int n_transverse = 0;
};

// Cubic complex absorbing potential along the far end of each channel valley,
// Gamma = strength * (distance into zone / width)^power, confined to a
// transverse band of half-width channel_halfwidth around the valley center.
struct CapSpec {
  double width = 0.0;              // m
  double strength = 0.0;           // J; 0 disables the CAP
  int power = 3;
  double channel_halfwidth = 0.0;  // m

  bool enabled() const { return strength > 0.0 && width > 0.0; }
};

struct RunLedger {
  double absorbed_reactant = 0.0;
  double absorbed_product = 0.0;
};

// Orthonormal harmonic-oscillator eigenfunction phi_n(x) for oscillator
// length a = sqrt(hbar/(m omega)); used for packet preparation and
// projections.
double ho_eigenfunction(int n, double x, double osc_len);

// Transverse Morse profile of a channel mapped into the simulation frame:
// V(x) = d_tilde [1 - e^{-beta_tilde x}]^2 with x the transverse offset.
struct ScaledChannelMorse {
  double d_tilde;     // J
  double beta_tilde;  // 1/m
};

ScaledChannelMorse scaled_channel_morse(const ScaledSurface& surface,
                                        Channel channel);

// When the scaled surface is supplied, the packet center must sit in the
// asymptotic part of its channel: the transverse cut there may deviate from
// the channel's asymptotic profile by at most 1% of the channel depth.
Wavefunction init_wavepacket(const WavePacketSpec& spec, const Grid2D& grid,
                             const SimChannelGeometry& geom,
                             const CapSpec& cap = {},
                             const ScaledSurface* surface = nullptr);

// Strang split-operator integrator for the scaled 2D Schroedinger equation on
// a periodic grid. The potential raster is precomputed once (clipped at
// 2 max(D1,D2) l^2 when built from a surface) and the CAP is folded into the
// potential half-steps; absorbed probability is ledgered per channel zone.
class Propagator {
 public:
  Propagator(const Grid2D& grid, const ScaledSurface& surface,
             const SimChannelGeometry& geom, const CapSpec& cap, double dt);
  // Test entry point: explicit potential raster (SI J, size n1*n2).
  Propagator(const Grid2D& grid, std::vector<double> v_raster,
             const SimChannelGeometry& geom, const CapSpec& cap, double dt);

  void step(Wavefunction& psi);

  double dt() const { return dt_; }
  const Grid2D& grid() const { return grid_; }
  const RunLedger& ledger() const { return ledger_; }
  void reset_ledger() { ledger_ = {}; }
  const std::vector<double>& potential_raster() const { return v_; }

  double kinetic_expectation(const Wavefunction& psi) const;   // J
  double potential_expectation(const Wavefunction& psi) const; // J
  double energy_expectation(const Wavefunction& psi) const;    // J
  // <P_parallel>/m for the given channel direction, m/s
  double mean_velocity(const Wavefunction& psi, Channel channel) const;

  bool in_cap_zone(double sim_q1, double sim_q2) const;

  // Default time step: 1e-3 of the fastest transverse period.
  static double default_dt(const SimChannelGeometry& geom);

 private:
  void build(const CapSpec& cap);

  struct ZoneSpan {
    std::size_t offset;   // into amp
    std::size_t len;
    std::size_t factors;  // into damp_half_
  };

  Grid2D grid_;
  SimChannelGeometry geom_;
  double dt_;
  double m_tilde_;
  CapSpec cap_;
  std::vector<double> v_;          // J
  std::vector<cdouble> phase_half_;
  std::vector<cdouble> kinetic_t_; // transposed spectral phases [n2][n1]
  std::vector<double> damp_half_;
  std::vector<ZoneSpan> zones_reactant_, zones_product_;
  fft::Plan2D plan_;
  std::vector<cdouble> spec_;
  RunLedger ledger_;
  double eta_cap_start_ = 0.0;
};

struct Schedule {
  double dt = 0.0;          // s; 0 selects the default
  long n_steps = 0;
  long snapshot_stride = 100;
};

struct RunSeriesEntry {
  long step;
  double time;
  double norm;
  double absorbed_reactant;
  double absorbed_product;
};

struct RunResult {
  RunLedger ledger;
  double final_norm = 0.0;
  double initial_norm = 0.0;
  std::vector<RunSeriesEntry> series;
};

using SnapshotHook = std::function<void(const Wavefunction&, long step)>;
using StepHook = std::function<void(const Wavefunction&, long step)>;

// Runs n_steps, recording the ledger series at the snapshot stride and
// invoking hooks. Verifies norm + absorbed = initial norm to 1e-6 at the end.
RunResult propagate(Propagator& prop, Wavefunction& psi, const Schedule& sched,
                    const SnapshotHook& on_snapshot = {},
                    const StepHook& per_step = {});

}  // namespace reactwave
