#include "reactwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>

#include "reactwave/constants.hpp"

namespace reactwave {

using constants::hbar;
using constants::h_planck;
using constants::pi;

// ----- saddle ----------------------------------------------------------------

namespace {

struct Eigs2 {
  double lo, hi;
};

Eigs2 sym_eigs(const std::array<double, 4>& h) {
  const double tr = h[0] + h[3];
  const double det = h[0] * h[3] - h[1] * h[2];
  const double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

}  // namespace

SaddleInfo find_saddle(const LepsSurface& surface, double guess_q1,
                       double guess_q2, const MassFactors& factors,
                       const ScalingParams& scaling, const SaddleOptions& opts) {
  double q1 = guess_q1, q2 = guess_q2;
  const double tol = opts.gradient_tolerance_scale *
                     surface.bc().dissociation_energy /
                     surface.bc().equilibrium_distance;
  // curvature floor keeps the mode-following step bounded near inflections
  const double eig_floor = 1e-4 * surface.bc().force_constant();
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const auto g = surface.gradient(q1, q2);
    if (std::hypot(g[0], g[1]) < tol) break;
    const auto h = surface.hessian(q1, q2);
    const Eigs2 e = sym_eigs(h);
    // eigenvector of the lower mode
    double v1x, v1y;
    if (std::abs(h[1]) > 1e-8 * (std::abs(h[0]) + std::abs(h[3]))) {
      v1x = h[1];
      v1y = e.lo - h[0];
    } else {
      v1x = h[0] <= h[3] ? 1.0 : 0.0;
      v1y = h[0] <= h[3] ? 0.0 : 1.0;
    }
    const double v1n = std::hypot(v1x, v1y);
    v1x /= v1n;
    v1y /= v1n;
    const double v2x = -v1y, v2y = v1x;
    // ascend the softest mode, descend the other: Newton once the signature
    // is saddle-like, uphill push off minima otherwise
    const double g1 = g[0] * v1x + g[1] * v1y;
    const double g2 = g[0] * v2x + g[1] * v2y;
    const double c1 = std::max(std::abs(e.lo), eig_floor);
    const double c2 = std::max(std::abs(e.hi), eig_floor);
    double s1 = g1 / c1;
    double s2 = -g2 / c2;
    double sx = s1 * v1x + s2 * v2x;
    double sy = s1 * v1y + s2 * v2y;
    const double len = std::hypot(sx, sy);
    if (len > opts.max_step) {
      sx *= opts.max_step / len;
      sy *= opts.max_step / len;
    }
    q1 += sx;
    q2 += sy;
  }
  if (it >= opts.max_iterations)
    throw numerical_error("find_saddle: no convergence in iteration limit");

  const auto h = surface.hessian(q1, q2);
  const Eigs2 e = sym_eigs(h);
  if (!(e.lo < 0.0 && e.hi > 0.0))
    throw numerical_error(
        e.lo > 0.0 ? "find_saddle: converged to a minimum"
                   : "find_saddle: converged to a maximum");

  SaddleInfo info{};
  info.q1 = q1;
  info.q2 = q2;
  info.energy = surface.energy(q1, q2);
  info.barrier = info.energy - surface.channel_asymptote(2);
  info.hessian_eigs[0] = e.lo;
  info.hessian_eigs[1] = e.hi;
  const SimCoords s = to_sim({q1, q2}, factors, scaling);
  info.sim_q1 = s.q1;
  info.sim_q2 = s.q2;
  info.iterations = it;
  return info;
}

// ----- minimax barrier oracle --------------------------------------------------

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n, -1) {}
  bool added(std::size_t x) const { return parent[x] >= 0; }
  std::size_t find(std::size_t x) {
    while (parent[x] != std::int32_t(x)) {
      parent[x] = parent[parent[x]];  // path halving
      x = std::size_t(parent[x]);
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = std::int32_t(b);
  }
};

struct PercolationResult {
  double energy;
  double q1, q2;
};

PercolationResult percolate(const LepsSurface& surface, double q1_lo,
                            double q1_hi, double q2_lo, double q2_hi,
                            std::size_t n, double seed_a_q1, double seed_a_q2,
                            double seed_b_q1, double seed_b_q2) {
  const double d1 = (q1_hi - q1_lo) / double(n - 1);
  const double d2 = (q2_hi - q2_lo) / double(n - 1);
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v[i * n + j] = surface.energy(q1_lo + double(i) * d1, q2_lo + double(j) * d2);

  std::vector<std::uint32_t> order(n * n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return v[a] < v[b]; });

  auto index_of = [&](double q1, double q2) {
    const long i = std::lround((q1 - q1_lo) / d1);
    const long j = std::lround((q2 - q2_lo) / d2);
    return std::size_t(std::clamp(i, 0L, long(n - 1))) * n +
           std::size_t(std::clamp(j, 0L, long(n - 1)));
  };
  const std::size_t seed_a = index_of(seed_a_q1, seed_a_q2);
  const std::size_t seed_b = index_of(seed_b_q1, seed_b_q2);

  UnionFind uf(n * n);
  for (std::uint32_t idx : order) {
    uf.parent[idx] = std::int32_t(idx);
    const std::size_t i = idx / n, j = idx % n;
    if (i > 0 && uf.added(idx - n)) uf.unite(idx, idx - n);
    if (i + 1 < n && uf.added(idx + n)) uf.unite(idx, idx + n);
    if (j > 0 && uf.added(idx - 1)) uf.unite(idx, idx - 1);
    if (j + 1 < n && uf.added(idx + 1)) uf.unite(idx, idx + 1);
    if (uf.added(seed_a) && uf.added(seed_b) && uf.find(seed_a) == uf.find(seed_b))
      return {v[idx], q1_lo + double(i) * d1, q2_lo + double(j) * d2};
  }
  throw numerical_error("minimax_barrier: seed regions never connect");
}

}  // namespace

double minimax_barrier(const LepsSurface& surface, double q1_lo, double q1_hi,
                       double q2_lo, double q2_hi, std::size_t n,
                       int zoom_levels) {
  const double q10 = surface.ab().equilibrium_distance;
  const double q20 = surface.bc().equilibrium_distance;
  const double margin1 = (q1_hi - q1_lo) * 0.01;
  const double margin2 = (q2_hi - q2_lo) * 0.01;
  PercolationResult r =
      percolate(surface, q1_lo, q1_hi, q2_lo, q2_hi, n,
                q1_hi - margin1, q20,   // reactant valley seed
                q10, q2_hi - margin2);  // product valley seed
  double d1 = (q1_hi - q1_lo) / double(n - 1);
  for (int z = 0; z < zoom_levels; ++z) {
    const double w = 3.0 * d1;
    // seeds straddle the pass along the local reaction path (q1 direction)
    r = percolate(surface, r.q1 - w, r.q1 + w, r.q2 - w, r.q2 + w, 201,
                  r.q1 - 0.9 * w, r.q2, r.q1 + 0.9 * w, r.q2);
    d1 = 2.0 * w / 200.0;
  }
  return r.energy - surface.channel_asymptote(2);
}

// ----- partitions ---------------------------------------------------------------

Populations region_populations(const Wavefunction& psi,
                               const ChannelPartition& partition,
                               const SimChannelGeometry& geom) {
  Populations p;
  const Grid2D& g = psi.grid;
  const double da = g.cell_area();
  for (std::size_t i = 0; i < g.n1; ++i) {
    const double x1 = g.x1(i);
    for (std::size_t j = 0; j < g.n2; ++j) {
      const double x2 = g.x2(j);
      const double w = std::norm(psi.at(i, j)) * da;
      const double d_reactant = std::abs(x2 - geom.chi20);
      const double d_product = std::abs(geom.chi1(x1, x2) - geom.chi10);
      if (geom.eta1(x1, x2) > partition.product_line_eta && d_product < d_reactant)
        p.product += w;
      else if (x1 > partition.reactant_line_q1 && d_reactant <= d_product)
        p.reactant += w;
      else
        p.interaction += w;
    }
  }
  return p;
}

Populations ledger_populations(const RunLedger& ledger, double residual_norm) {
  return {ledger.absorbed_reactant, ledger.absorbed_product, residual_norm};
}

// ----- morse bound states --------------------------------------------------------

namespace {

// Eigenvalues of a symmetric tridiagonal matrix below `count`, by Sturm
// bisection, then eigenvectors by inverse iteration.
int sturm_count(const std::vector<double>& diag, double off, double x) {
  int count = 0;
  double d = 1.0;
  const double off2 = off * off;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    d = diag[i] - x - (i > 0 ? off2 / d : 0.0);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const std::vector<double>& diag, double off, int k,
                         double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(hi) + 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iterate(const std::vector<double>& diag, double off,
                                    double lambda) {
  const std::size_t m = diag.size();
  std::vector<double> x(m, 1.0), a(m), b(m), c(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = 1.0 + 1e-3 * double(i % 7);
  for (int pass = 0; pass < 3; ++pass) {
    // solve (T - lambda I) y = x by Thomas algorithm with a tiny shift
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = diag[i] - lambda + 1e-12 * std::abs(lambda);
      b[i] = off;
      c[i] = x[i];
    }
    for (std::size_t i = 1; i < m; ++i) {
      const double w = b[i - 1] / a[i - 1];
      a[i] -= w * b[i - 1];
      c[i] -= w * c[i - 1];
    }
    x[m - 1] = c[m - 1] / a[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = (c[i] - b[i] * x[i + 1]) / a[i];
    double nrm = 0.0;
    for (double t : x) nrm += t * t;
    nrm = std::sqrt(nrm);
    for (double& t : x) t /= nrm;
  }
  return x;
}

}  // namespace

MorseStates morse_bound_states(double dissociation, double beta, double mass,
                               int n_states, double x_lo, double x_hi,
                               std::size_t points) {
  if (!(dissociation > 0.0) || !(beta > 0.0) || !(mass > 0.0))
    throw validation_error("morse_bound_states: D, beta, mass must be > 0");
  if (n_states < 1) throw validation_error("morse_bound_states: need n_states >= 1");
  const double omega = beta * std::sqrt(2.0 * dissociation / mass);
  const double lambda = std::sqrt(2.0 * mass * dissociation) / (hbar * beta);
  const int n_bound = int(std::floor(lambda - 0.5)) + 1;  // n = 0 .. lambda - 1/2
  if (n_bound < 1)
    throw validation_error("morse_bound_states: potential holds no bound state");

  MorseStates out;
  out.n_states = std::min(n_states, n_bound);
  for (int n = 0; n < out.n_states; ++n) {
    const double e0 = hbar * omega * (n + 0.5);
    out.eigenvalues.push_back(e0 - e0 * e0 / (4.0 * dissociation));
  }

  // finite-difference eigenproblem on [x_lo, x_hi]
  const std::size_t m = points;
  const double h = (x_hi - x_lo) / double(m - 1);
  out.coords.resize(m);
  std::vector<double> diag(m);
  const double kin = hbar * hbar / (mass * h * h);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = x_lo + double(i) * h;
    out.coords[i] = x;
    const double e = std::exp(-beta * x);
    diag[i] = kin + dissociation * (1.0 - e) * (1.0 - e);
  }
  const double off = -0.5 * kin;

  double lo = 0.0, hi = dissociation + kin;
  out.grid_eigenvalues.resize(out.n_states);
  out.states.resize(std::size_t(out.n_states) * m);
  for (int k = 0; k < out.n_states; ++k) {
    const double ev = bisect_eigenvalue(diag, off, k, lo, hi);
    out.grid_eigenvalues[k] = ev;
    auto vec = inverse_iterate(diag, off, ev);
    // sign convention: positive at the outer turning side
    double signref = 0.0;
    for (std::size_t i = m - 1; i-- > 0;) {
      if (std::abs(vec[i]) > 1e-3) { signref = vec[i]; break; }
    }
    const double s = (signref < 0.0 ? -1.0 : 1.0) / std::sqrt(h);
    for (std::size_t i = 0; i < m; ++i)
      out.states[std::size_t(k) * m + i] = vec[i] * s;
  }
  return out;
}

// ----- transverse bases ------------------------------------------------------------

TransverseBasis make_transverse_basis(const BasisSpec& spec, Channel channel,
                                      const SimChannelGeometry& geom,
                                      const ScaledSurface* surface,
                                      double coord_lo, double spacing,
                                      std::size_t points) {
  if (spec.n_states < 1)
    throw validation_error("make_transverse_basis: n_states must be >= 1");
  const bool reactant = channel == Channel::reactant;
  const double center = reactant ? geom.chi20 : geom.chi10;

  TransverseBasis b;
  b.kind = spec.kind;
  b.coords.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    b.coords[i] = coord_lo + double(i) * spacing;

  if (spec.kind == VibBasis::harmonic) {
    b.n_states = spec.n_states;
    const double osc = reactant ? geom.osc_len2() : geom.osc_len1();
    b.states.resize(std::size_t(b.n_states) * points);
    for (int n = 0; n < b.n_states; ++n)
      for (std::size_t i = 0; i < points; ++i)
        b.states[std::size_t(n) * points + i] =
            ho_eigenfunction(n, b.coords[i] - center, osc);
    return b;
  }

  if (!surface)
    throw validation_error("make_transverse_basis: morse basis needs the surface");
  const ScaledChannelMorse morse = scaled_channel_morse(*surface, channel);
  const MorseStates ms =
      morse_bound_states(morse.d_tilde, morse.beta_tilde, geom.m_tilde,
                         spec.n_states, b.coords.front() - center,
                         b.coords.back() - center, points);
  b.n_states = ms.n_states;
  if (ms.n_states < spec.n_states) b.truncated_to = ms.n_states;
  b.states = ms.states;
  return b;
}

// ----- snapshot projections -----------------------------------------------------------

namespace {

// Sixth-order Lagrange weights on nodes -2..3 for fractional offset t in [0,1).
void lagrange6(double t, double* w) {
  static constexpr double denom[6] = {-120.0, 24.0, -12.0, 12.0, -24.0, 120.0};
  const double d[6] = {t + 2.0, t + 1.0, t, t - 1.0, t - 2.0, t - 3.0};
  for (int m = 0; m < 6; ++m) {
    double p = 1.0;
    for (int k = 0; k < 6; ++k)
      if (k != m) p *= d[k];
    w[m] = p / denom[m];
  }
}

// Separable 6x6 Lagrange sample of a complex raster at fractional indices;
// exact through degree five, error O((k dx)^6) on oscillatory data.
cdouble interp6(const Wavefunction& psi, double u, double v) {
  const long n1 = long(psi.grid.n1), n2 = long(psi.grid.n2);
  const long i0 = long(std::floor(u));
  const long j0 = long(std::floor(v));
  double wu[6], wv[6];
  lagrange6(u - double(i0), wu);
  lagrange6(v - double(j0), wv);
  cdouble acc = 0.0;
  for (int a = 0; a < 6; ++a) {
    const long i = std::clamp(i0 - 2 + a, 0L, n1 - 1);
    cdouble row = 0.0;
    for (int b = 0; b < 6; ++b) {
      const long j = std::clamp(j0 - 2 + b, 0L, n2 - 1);
      row += wv[b] * psi.amp[std::size_t(i) * std::size_t(n2) + std::size_t(j)];
    }
    acc += wu[a] * row;
  }
  return acc;
}

cdouble sample_point(const Wavefunction& psi, double q1, double q2) {
  const Grid2D& g = psi.grid;
  return interp6(psi, (q1 - g.q1_min) / g.dx1, (q2 - g.q2_min) / g.dx2);
}

}  // namespace

VibrationalDistribution project_snapshot(const Wavefunction& psi,
                                         const ChannelPartition& partition,
                                         Channel channel, const BasisSpec& spec,
                                         const SimChannelGeometry& geom,
                                         const ScaledSurface* surface) {
  const Grid2D& g = psi.grid;
  const bool reactant = channel == Channel::reactant;

  VibrationalDistribution out;
  out.channel = channel;
  out.basis = spec.kind;

  if (reactant) {
    // transverse cuts are grid rows: use the grid's own Q2 coordinates
    const double hw = 8.0 * geom.osc_len2();
    const long j0 = std::max(0L, long((geom.chi20 - hw - g.q2_min) / g.dx2));
    const long j1 = std::min(long(g.n2) - 1, long((geom.chi20 + hw - g.q2_min) / g.dx2));
    const std::size_t pts = std::size_t(j1 - j0 + 1);
    const TransverseBasis basis = make_transverse_basis(
        spec, channel, geom, surface, g.x2(std::size_t(j0)), g.dx2, pts);
    out.truncated = basis.truncated_to >= 0;
    out.populations.assign(std::size_t(basis.n_states), 0.0);
    for (std::size_t i = 0; i < g.n1; ++i) {
      if (g.x1(i) <= partition.reactant_line_q1) continue;
      double colnorm = 0.0;
      for (std::size_t j = std::size_t(j0); j <= std::size_t(j1); ++j)
        colnorm += std::norm(psi.at(i, j)) * g.dx2;
      out.channel_population += colnorm * g.dx1;
      for (int n = 0; n < basis.n_states; ++n) {
        cdouble c = 0.0;
        const double* phi = basis.state(n);
        for (std::size_t j = std::size_t(j0); j <= std::size_t(j1); ++j)
          c += phi[j - std::size_t(j0)] * psi.at(i, j);
        out.populations[std::size_t(n)] += std::norm(c * g.dx2) * g.dx1;
      }
    }
  } else {
    // diagonal channel: interpolated cuts at constant eta_1
    const double hw = 8.0 * geom.osc_len1();
    const std::size_t pts = 192;
    const double spacing = 2.0 * hw / double(pts - 1);
    const TransverseBasis basis = make_transverse_basis(
        spec, channel, geom, surface, geom.chi10 - hw, spacing, pts);
    out.truncated = basis.truncated_to >= 0;
    out.populations.assign(std::size_t(basis.n_states), 0.0);
    const double d_eta = std::min(g.dx1, g.dx2);
    // furthest eta reachable on the valley center line inside the grid
    const double eta_max =
        std::min((g.q1_max() - g.dx1 - geom.sin_beta * geom.chi10) / geom.cos_beta,
                 (g.q2_max() - g.dx2 + geom.cos_beta * geom.chi10) / geom.sin_beta);
    std::vector<cdouble> cut(pts);
    for (double eta = partition.product_line_eta; eta <= eta_max; eta += d_eta) {
      double cutnorm = 0.0;
      for (std::size_t mpt = 0; mpt < pts; ++mpt) {
        const double chi = basis.coords[mpt];
        const double q1 = geom.sin_beta * chi + geom.cos_beta * eta;
        const double q2 = -geom.cos_beta * chi + geom.sin_beta * eta;
        if (q1 < g.q1_min || q1 > g.q1_max() - g.dx1 || q2 < g.q2_min ||
            q2 > g.q2_max() - g.dx2) {
          cut[mpt] = 0.0;
          continue;
        }
        cut[mpt] = sample_point(psi, q1, q2);
        cutnorm += std::norm(cut[mpt]) * spacing;
      }
      out.channel_population += cutnorm * d_eta;
      for (int n = 0; n < basis.n_states; ++n) {
        cdouble c = 0.0;
        const double* phi = basis.state(n);
        for (std::size_t mpt = 0; mpt < pts; ++mpt) c += phi[mpt] * cut[mpt];
        out.populations[std::size_t(n)] += std::norm(c * spacing) * d_eta;
      }
    }
  }
  double captured = 0.0;
  for (double p : out.populations) captured += p;
  out.residual = out.channel_population - captured;
  return out;
}

// ----- flux probe ----------------------------------------------------------------------

FluxProbe::FluxProbe(Channel channel, double line_position, const Grid2D& grid,
                     const SimChannelGeometry& geom,
                     std::vector<BasisSpec> bases, const ScaledSurface* surface,
                     double cut_lo, double cut_hi, std::size_t samples,
                     long stride)
    : channel_(channel), line_(line_position), grid_(grid), geom_(geom),
      stride_(stride), samples_(samples) {
  if (stride_ < 1) throw validation_error("FluxProbe: stride must be >= 1");
  if (samples_ < 8) throw validation_error("FluxProbe: too few samples");
  if (!(cut_hi > cut_lo)) throw validation_error("FluxProbe: empty cut window");
  const double spacing = (cut_hi - cut_lo) / double(samples_ - 1);
  const bool reactant = channel == Channel::reactant;

  for (const BasisSpec& spec : bases)
    bases_.push_back(make_transverse_basis(spec, channel, geom, surface,
                                           cut_lo, spacing, samples_));

  delta_ = 0.35 * std::min(grid.dx1, grid.dx2);
  pt_q1_.resize(5 * samples_);
  pt_q2_.resize(5 * samples_);
  for (int s = 0; s < 5; ++s) {
    const double longi = line_ + (s - 2) * delta_;
    for (std::size_t m = 0; m < samples_; ++m) {
      const double t = cut_lo + double(m) * spacing;
      double q1, q2;
      if (reactant) {
        q1 = longi;
        q2 = t;
      } else {
        q1 = geom.sin_beta * t + geom.cos_beta * longi;
        q2 = -geom.cos_beta * t + geom.sin_beta * longi;
      }
      if (q1 < grid.q1_min || q1 > grid.q1_max() - grid.dx1 || q2 < grid.q2_min ||
          q2 > grid.q2_max() - grid.dx2)
        throw validation_error("FluxProbe: analysis line leaves the grid");
      pt_q1_[std::size_t(s) * samples_ + m] = q1;
      pt_q2_[std::size_t(s) * samples_ + m] = q2;
    }
  }
  std::size_t total_states = 0;
  for (const auto& b : bases_) total_states += std::size_t(b.n_states);
  acc_.assign(total_states, 0.0);
  prev_flux_.assign(total_states, 0.0);
}

void FluxProbe::observe(const Wavefunction& psi, long step) {
  if (step % stride_ != 0) return;
  const double spacing = bases_.empty() ? grid_.dx2 : bases_[0].spacing();

  std::vector<cdouble> line(samples_), deriv(samples_);
  std::vector<cdouble> stencil(5 * samples_);
  for (std::size_t k = 0; k < 5 * samples_; ++k)
    stencil[k] = sample_point(psi, pt_q1_[k], pt_q2_[k]);
  for (std::size_t m = 0; m < samples_; ++m) {
    line[m] = stencil[2 * samples_ + m];
    deriv[m] = (stencil[0 * samples_ + m] - 8.0 * stencil[1 * samples_ + m] +
                8.0 * stencil[3 * samples_ + m] - stencil[4 * samples_ + m]) /
               (12.0 * delta_);
  }

  const double vel_factor = hbar / geom_.m_tilde;
  double total = 0.0;
  for (std::size_t m = 0; m < samples_; ++m)
    total += std::imag(std::conj(line[m]) * deriv[m]) * spacing;
  total *= vel_factor;

  std::vector<double> flux(acc_.size(), 0.0);
  std::size_t slot = 0;
  for (const TransverseBasis& b : bases_) {
    for (int n = 0; n < b.n_states; ++n, ++slot) {
      cdouble c = 0.0, d = 0.0;
      const double* phi = b.state(n);
      for (std::size_t m = 0; m < samples_; ++m) {
        c += phi[m] * line[m];
        d += phi[m] * deriv[m];
      }
      c *= spacing;
      d *= spacing;
      flux[slot] = vel_factor * std::imag(std::conj(c) * d);
    }
  }

  if (have_prev_) {
    const double dt = psi.time - last_time_;
    for (std::size_t k = 0; k < acc_.size(); ++k)
      acc_[k] += 0.5 * (prev_flux_[k] + flux[k]) * dt;
    total_ += 0.5 * (prev_total_ + total) * dt;
  }
  prev_flux_ = flux;
  prev_total_ = total;
  last_time_ = psi.time;
  have_prev_ = true;
}

std::vector<double> FluxProbe::populations(std::size_t b) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < b; ++k) off += std::size_t(bases_[k].n_states);
  return {acc_.begin() + long(off),
          acc_.begin() + long(off + std::size_t(bases_[b].n_states))};
}

// ----- contour rasters --------------------------------------------------------------------

namespace {

void write_raster(std::ostream& os, const char* header, const ContourWindow& w,
                  double clip, const std::function<double(double, double)>& f) {
  os << header << '\n';
  char buf[96];
  for (std::size_t i = 0; i < w.n1; ++i) {
    const double q1 = w.q1_lo + (w.q1_hi - w.q1_lo) * double(i) / double(w.n1 - 1);
    for (std::size_t j = 0; j < w.n2; ++j) {
      const double q2 =
          w.q2_lo + (w.q2_hi - w.q2_lo) * double(j) / double(w.n2 - 1);
      const double v = std::min(f(q1, q2), clip);
      std::snprintf(buf, sizeof buf, "%.9e,%.9e,%.9e\n", q1, q2, v);
      os << buf;
    }
  }
}

}  // namespace

void contour_raster_chem(std::ostream& os, const LepsSurface& surface,
                         const ContourWindow& window, double clip_over_ezp) {
  const double ezp = 0.5 * h_planck * harmonic_params(surface.bc()).frequency;
  write_raster(os, "q1,q2,v_over_ezp", window, clip_over_ezp,
               [&](double q1, double q2) { return surface.energy(q1, q2) / ezp; });
}

void contour_raster_sim(std::ostream& os, const ScaledSurface& surface,
                        const SimChannelGeometry& geom,
                        const ContourWindow& window, double clip_over_ezp) {
  const double ezp = 0.5 * h_planck * geom.nu_tilde2;
  write_raster(os, "Q1,Q2,v_over_ezp", window, clip_over_ezp,
               [&](double q1, double q2) { return surface.energy(q1, q2) / ezp; });
}

}  // namespace reactwave
