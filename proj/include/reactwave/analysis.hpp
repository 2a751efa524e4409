#pragma once

#include <iosfwd>
#include <vector>

#include "reactwave/frames.hpp"
#include "reactwave/grid.hpp"
#include "reactwave/propagator.hpp"

namespace reactwave {

// ----- stationary points ---------------------------------------------------

struct SaddleInfo {
  double q1, q2;            // m, chemical frame
  double energy;            // J, absolute surface value
  double barrier;           // J, relative to the reactant-channel asymptote
  double hessian_eigs[2];   // J/m^2, ascending
  double sim_q1, sim_q2;    // m, image under the mass-weighted map
  int iterations;
};

struct SaddleOptions {
  int max_iterations = 200;
  double gradient_tolerance_scale = 1e-10;  // times D2/q20
  double max_step = 0.2e-10;                // m
};

// Newton search on the analytic gradient/Hessian; classified by the Hessian
// signature at convergence.
SaddleInfo find_saddle(const LepsSurface& surface, double guess_q1,
                       double guess_q2, const MassFactors& factors,
                       const ScalingParams& scaling,
                       const SaddleOptions& opts = {});

// Lowest barrier along any 4-connected grid path between the channel seeds;
// brute-force minimax by threshold percolation with union-find, refined by
// repeated zooming. Test oracle for find_saddle, derivative-free by
// construction.
double minimax_barrier(const LepsSurface& surface, double q1_lo, double q1_hi,
                       double q2_lo, double q2_hi, std::size_t n,
                       int zoom_levels = 2);

// ----- channel partition and populations -----------------------------------

// Region boundaries in the simulation frame: the reactant line is a constant
// Q1 plane, the product line a constant eta_1 plane across the rotated valley.
struct ChannelPartition {
  double reactant_line_q1;  // m
  double product_line_eta;  // m
};

struct Populations {
  double reactant = 0.0;
  double product = 0.0;
  double interaction = 0.0;
};

// Integrates |psi|^2 over the three regions; cells beyond a channel line are
// assigned to the channel whose valley is transversally nearer.
Populations region_populations(const Wavefunction& psi,
                               const ChannelPartition& partition,
                               const SimChannelGeometry& geom);

// Ledger route to the same numbers: absorbed flux plus residual norm.
Populations ledger_populations(const RunLedger& ledger, double residual_norm);

// ----- transverse bases ------------------------------------------------------

enum class VibBasis { harmonic, morse };

struct BasisSpec {
  VibBasis kind = VibBasis::harmonic;
  int n_states = 5;
};

// Transverse eigenfunctions tabulated on a uniform cut across a channel,
// orthonormal with respect to the cut spacing.
struct TransverseBasis {
  VibBasis kind;
  int n_states;
  std::vector<double> coords;  // m, cut coordinate (Q2 or chi_1)
  std::vector<double> states;  // [n][points], 1/sqrt(m) normalization
  int truncated_to = -1;       // >= 0 when fewer bound states than requested

  double spacing() const { return coords[1] - coords[0]; }
  const double* state(int n) const { return states.data() + n * coords.size(); }
};

// Harmonic basis: analytic Hermite-Gaussian states. Morse basis: bound states
// of the scaled transverse Morse profile by finite-difference diagonalization
// (eigenvalues cross-checked against the closed form elsewhere). The morse
// kind requires the scaled surface.
TransverseBasis make_transverse_basis(const BasisSpec& spec, Channel channel,
                                      const SimChannelGeometry& geom,
                                      const ScaledSurface* surface,
                                      double coord_lo, double spacing,
                                      std::size_t points);

struct MorseStates {
  std::vector<double> eigenvalues;       // closed form, J
  std::vector<double> grid_eigenvalues;  // FD diagonalization, J
  std::vector<double> coords;            // m
  std::vector<double> states;            // [n][points]
  int n_states;

  const double* state(int n) const { return states.data() + n * coords.size(); }
};

// Bound states of V(x) = D [1 - e^{-beta x}]^2 for mass m, x measured from
// the minimum. Throws when the well holds no bound state; truncates when it
// holds fewer than requested.
MorseStates morse_bound_states(double dissociation, double beta, double mass,
                               int n_states, double x_lo, double x_hi,
                               std::size_t points);

// ----- vibrational distributions ---------------------------------------------

struct VibrationalDistribution {
  Channel channel;
  VibBasis basis;
  std::vector<double> populations;  // index n
  double residual = 0.0;
  double channel_population = 0.0;
  bool truncated = false;
};

// Snapshot-mode distribution: transverse cuts of the channel region beyond
// the partition line projected onto the basis and accumulated along the
// channel axis.
VibrationalDistribution project_snapshot(const Wavefunction& psi,
                                         const ChannelPartition& partition,
                                         Channel channel, const BasisSpec& spec,
                                         const SimChannelGeometry& geom,
                                         const ScaledSurface* surface = nullptr);

// ----- time-integrated flux probe -------------------------------------------

// Accumulates mode-resolved probability flux through an analysis line during
// propagation: c_n(t) = <phi_n | psi(line)>, F_n = (hbar/m) Im[c_n* d_n] with
// d_n the projection of the longitudinal derivative, P_n = integral F_n dt.
// The product line is diagonal in the grid, so psi is sampled by bicubic
// interpolation; the derivative uses a five-point stencil of parallel lines.
class FluxProbe {
 public:
  // cut_lo/cut_hi bound the transverse cut (Q2 for the reactant channel,
  // chi_1 for the product channel); the window may sit asymmetrically around
  // the valley when a repulsive wall truncates one side.
  FluxProbe(Channel channel, double line_position, const Grid2D& grid,
            const SimChannelGeometry& geom, std::vector<BasisSpec> bases,
            const ScaledSurface* surface, double cut_lo, double cut_hi,
            std::size_t samples, long stride);

  // Call after every propagation step (and once at step 0).
  void observe(const Wavefunction& psi, long step);

  std::size_t basis_count() const { return bases_.size(); }
  const TransverseBasis& basis(std::size_t b) const { return bases_[b]; }
  // Time-integrated modal populations for basis b.
  std::vector<double> populations(std::size_t b) const;
  double total_flux() const { return total_; }
  long stride() const { return stride_; }
  Channel channel() const { return channel_; }
  double line_position() const { return line_; }

 private:
  Channel channel_;
  double line_;
  Grid2D grid_;
  SimChannelGeometry geom_;
  std::vector<TransverseBasis> bases_;
  long stride_;
  double last_time_ = 0.0;
  std::vector<double> acc_;        // flattened [basis][n]
  std::vector<double> prev_flux_;
  double total_ = 0.0;
  double prev_total_ = 0.0;
  bool have_prev_ = false;
  std::vector<double> pt_q1_, pt_q2_;  // [stencil line][sample]
  std::size_t samples_;
  double delta_;  // stencil spacing along the channel axis, m
};

// ----- contour rasters --------------------------------------------------------

struct ContourWindow {
  double q1_lo, q1_hi, q2_lo, q2_hi;  // m
  std::size_t n1, n2;
};

// Chemical-frame raster of V/E_zp with E_zp = h nu_2 / 2, clipped from above.
void contour_raster_chem(std::ostream& os, const LepsSurface& surface,
                         const ContourWindow& window, double clip_over_ezp);

// Simulation-frame raster normalized by h nu_tilde_2 / 2.
void contour_raster_sim(std::ostream& os, const ScaledSurface& surface,
                        const SimChannelGeometry& geom,
                        const ContourWindow& window, double clip_over_ezp);

}  // namespace reactwave
