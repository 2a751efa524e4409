#include "reactwave/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "reactwave/constants.hpp"
#include "reactwave/kernels.hpp"

namespace reactwave {

using constants::hbar;
using constants::pi;

double ho_eigenfunction(int n, double x, double osc_len) {
  if (n < 0) throw validation_error("ho_eigenfunction: n must be >= 0");
  const double y = x / osc_len;
  const double u0 = std::pow(pi, -0.25) / std::sqrt(osc_len) * std::exp(-0.5 * y * y);
  if (n == 0) return u0;
  double prev = u0;
  double cur = std::sqrt(2.0) * y * u0;
  for (int k = 2; k <= n; ++k) {
    const double next =
        std::sqrt(2.0 / k) * y * cur - std::sqrt(double(k - 1) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

struct CapGeometry {
  bool enabled = false;
  double q1_start = 0.0;   // reactant zone: Q1 >= q1_start
  double eta_start = 0.0;  // product zone: eta_1 >= eta_start
};

CapGeometry cap_geometry(const Grid2D& g, const SimChannelGeometry& geom,
                         const CapSpec& cap) {
  CapGeometry out;
  if (!cap.enabled()) return out;
  out.enabled = true;
  out.q1_start = g.q1_max() - cap.width;
  const double eta_exit =
      std::min((g.q1_max() - geom.sin_beta * geom.chi10) / geom.cos_beta,
               (g.q2_max() + geom.cos_beta * geom.chi10) / geom.sin_beta);
  out.eta_start = eta_exit - cap.width;
  return out;
}

bool point_in_cap(const CapGeometry& cg, const SimChannelGeometry& geom,
                  const CapSpec& cap, double q1, double q2) {
  if (!cg.enabled) return false;
  if (q1 >= cg.q1_start && std::abs(q2 - geom.chi20) <= cap.channel_halfwidth)
    return true;
  const double eta = geom.eta1(q1, q2);
  const double chi = geom.chi1(q1, q2);
  return eta >= cg.eta_start && std::abs(chi - geom.chi10) <= cap.channel_halfwidth;
}

}  // namespace

ScaledChannelMorse scaled_channel_morse(const ScaledSurface& surface,
                                        Channel channel) {
  const bool reactant = channel == Channel::reactant;
  const LepsSurface& leps = surface.surface();
  const MassFactors& f = surface.factors();
  const ScalingParams& s = surface.scaling();
  const DiatomSpec& d = reactant ? leps.bc() : leps.ab();
  const double geom_factor =
      (reactant ? f.b : f.a) * f.sin_beta();
  // chi = q * geom_factor / (l sqrt(m~)); invert for the range parameter
  return {d.dissociation_energy * s.l * s.l,
          d.beta_morse * s.l * std::sqrt(s.m_tilde) / geom_factor};
}

Wavefunction init_wavepacket(const WavePacketSpec& spec, const Grid2D& grid,
                             const SimChannelGeometry& geom,
                             const CapSpec& cap, const ScaledSurface* surface) {
  grid.validate();
  if (!(spec.sigma > 0.0))
    throw validation_error("init_wavepacket: sigma must be > 0");
  if (spec.n_transverse < 0)
    throw validation_error("init_wavepacket: transverse index must be >= 0");

  const bool reactant = spec.channel == Channel::reactant;
  const double osc_len = reactant ? geom.osc_len2() : geom.osc_len1();
  const double k_wave = geom.m_tilde * spec.velocity / hbar;

  // channel-center point at the packet center
  double c1, c2;
  if (reactant) {
    c1 = spec.center;
    c2 = geom.chi20;
  } else {
    c1 = geom.sin_beta * geom.chi10 + geom.cos_beta * spec.center;
    c2 = -geom.cos_beta * geom.chi10 + geom.sin_beta * spec.center;
  }
  if (c1 <= grid.q1_min || c1 >= grid.q1_max() || c2 <= grid.q2_min ||
      c2 >= grid.q2_max())
    throw validation_error("init_wavepacket: packet center outside grid");
  const CapGeometry cg = cap_geometry(grid, geom, cap);
  if (point_in_cap(cg, geom, cap, c1, c2))
    throw validation_error("init_wavepacket: packet center inside a CAP zone");

  if (surface) {
    // distortion of the transverse cut relative to the channel's asymptotic
    // profile, measured across one oscillator length
    const ScaledChannelMorse morse = scaled_channel_morse(*surface, spec.channel);
    const double v0 = surface->energy(c1, c2);
    double excess = 0.0;
    for (double x : {-osc_len, -0.5 * osc_len, 0.5 * osc_len, osc_len}) {
      double p1 = c1, p2 = c2;
      if (reactant) {
        p2 += x;
      } else {
        p1 += geom.sin_beta * x;
        p2 -= geom.cos_beta * x;
      }
      const double e = std::exp(-morse.beta_tilde * x);
      const double asymptotic = morse.d_tilde * (1.0 - e) * (1.0 - e);
      excess = std::max(excess, std::abs(surface->energy(p1, p2) - v0 -
                                         asymptotic));
    }
    if (excess > 0.01 * morse.d_tilde)
      throw validation_error(
          "init_wavepacket: packet center is not in the asymptotic channel "
          "region (transverse profile off by more than 1% of the depth)");
  }

  // node spacing of the transverse state vs grid resolution
  const double node_spacing =
      pi * osc_len / std::sqrt(2.0 * spec.n_transverse + 1.0);
  const double transverse_dx = reactant ? grid.dx2 : std::max(grid.dx1, grid.dx2);
  if (transverse_dx > node_spacing / 8.0)
    throw validation_error(
        "init_wavepacket: transverse state not resolved (need >= 8 points per "
        "node spacing)");

  Wavefunction psi(grid);
  for (std::size_t i = 0; i < grid.n1; ++i) {
    const double x1 = grid.x1(i);
    for (std::size_t j = 0; j < grid.n2; ++j) {
      const double x2 = grid.x2(j);
      double longi, trans;
      if (reactant) {
        longi = x1;
        trans = x2 - geom.chi20;
      } else {
        longi = geom.eta1(x1, x2);
        trans = geom.chi1(x1, x2) - geom.chi10;
      }
      const double dl = longi - spec.center;
      const double envelope = std::exp(-dl * dl / (4.0 * spec.sigma * spec.sigma));
      const double phi = ho_eigenfunction(spec.n_transverse, trans, osc_len);
      const double phase = k_wave * longi;
      psi.at(i, j) = envelope * phi * cdouble{std::cos(phase), std::sin(phase)};
    }
  }
  psi.normalize();
  return psi;
}

Propagator::Propagator(const Grid2D& grid, const ScaledSurface& surface,
                       const SimChannelGeometry& geom, const CapSpec& cap,
                       double dt)
    : grid_(grid), geom_(geom), dt_(dt), m_tilde_(geom.m_tilde), cap_(cap),
      plan_(grid.n1, grid.n2) {
  grid_.validate();
  const double l2 = surface.scaling().l * surface.scaling().l;
  const double v_clip =
      2.0 * std::max(surface.surface().ab().dissociation_energy,
                     surface.surface().bc().dissociation_energy) * l2;
  v_.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.n1; ++i)
    for (std::size_t j = 0; j < grid_.n2; ++j)
      v_[i * grid_.n2 + j] =
          std::min(surface.energy(grid_.x1(i), grid_.x2(j)), v_clip);
  build(cap);
}

Propagator::Propagator(const Grid2D& grid, std::vector<double> v_raster,
                       const SimChannelGeometry& geom, const CapSpec& cap,
                       double dt)
    : grid_(grid), geom_(geom), dt_(dt), m_tilde_(geom.m_tilde), cap_(cap),
      v_(std::move(v_raster)), plan_(grid.n1, grid.n2) {
  grid_.validate();
  if (v_.size() != grid_.size())
    throw validation_error("Propagator: potential raster size mismatch");
  build(cap);
}

double Propagator::default_dt(const SimChannelGeometry& geom) {
  return 1e-3 / std::max(geom.nu_tilde1, geom.nu_tilde2);
}

void Propagator::build(const CapSpec& cap) {
  if (!(dt_ > 0.0)) throw validation_error("Propagator: dt must be > 0");
  if (!(m_tilde_ > 0.0)) throw validation_error("Propagator: m_tilde must be > 0");

  double v_max = 0.0;
  for (double v : v_) v_max = std::max(v_max, std::abs(v));
  if (dt_ * v_max / hbar >= 0.5)
    throw validation_error(
        "Propagator: dt violates the phase-wrap guard dt max|V|/hbar < 0.5");

  const std::size_t n = grid_.size();
  phase_half_.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double ph = -v_[idx] * dt_ / (2.0 * hbar);
    phase_half_[idx] = {std::cos(ph), std::sin(ph)};
  }

  kinetic_t_.resize(n);
  const double dk1 = 2.0 * pi / (double(grid_.n1) * grid_.dx1);
  const double dk2 = 2.0 * pi / (double(grid_.n2) * grid_.dx2);
  for (std::size_t j = 0; j < grid_.n2; ++j) {
    const double f2 = j < grid_.n2 / 2 ? double(j) : double(j) - double(grid_.n2);
    const double k2 = f2 * dk2;
    for (std::size_t i = 0; i < grid_.n1; ++i) {
      const double f1 = i < grid_.n1 / 2 ? double(i) : double(i) - double(grid_.n1);
      const double k1 = f1 * dk1;
      const double ph = -hbar * (k1 * k1 + k2 * k2) * dt_ / (2.0 * m_tilde_);
      kinetic_t_[j * grid_.n1 + i] = {std::cos(ph), std::sin(ph)};
    }
  }

  spec_.resize(n);

  if (!cap.enabled()) return;
  if (cap.width < 10.0 * std::max(grid_.dx1, grid_.dx2))
    throw validation_error("CapSpec: width must span at least 10 grid cells");
  if (!(cap.channel_halfwidth > 0.0))
    throw validation_error("CapSpec: channel_halfwidth must be > 0");
  if (cap.power < 1) throw validation_error("CapSpec: power must be >= 1");

  const CapGeometry cg = cap_geometry(grid_, geom_, cap);
  eta_cap_start_ = cg.eta_start;
  const double sb = geom_.sin_beta, cb = geom_.cos_beta;

  auto damp_factor = [&](double ramp) {
    const double r = std::clamp(ramp, 0.0, 1.0);
    const double gamma = cap.strength * std::pow(r, cap.power);
    return std::exp(-gamma * dt_ / (2.0 * hbar));
  };

  for (std::size_t i = 0; i < grid_.n1; ++i) {
    const double x1 = grid_.x1(i);
    // reactant zone: Q1 ramp, transverse band around chi20
    if (x1 >= cg.q1_start) {
      const double lo = geom_.chi20 - cap.channel_halfwidth;
      const double hi = geom_.chi20 + cap.channel_halfwidth;
      const long j0 = std::max(0L, (long)std::ceil((lo - grid_.q2_min) / grid_.dx2));
      const long j1 = std::min((long)grid_.n2 - 1,
                               (long)std::floor((hi - grid_.q2_min) / grid_.dx2));
      if (j1 >= j0) {
        const double f = damp_factor((x1 - cg.q1_start) / cap.width);
        ZoneSpan span{i * grid_.n2 + std::size_t(j0), std::size_t(j1 - j0 + 1),
                      damp_half_.size()};
        for (long j = j0; j <= j1; ++j) damp_half_.push_back(f);
        zones_reactant_.push_back(span);
      }
    }
    // product zone: eta_1 ramp along the rotated valley, band around chi10
    {
      // eta >= eta_start  =>  x2 >= (eta_start - cb x1)/sb
      // |chi - chi10| <= hw => x2 in [(sb x1 - chi10 - hw)/cb, (sb x1 - chi10 + hw)/cb]
      const double x2_eta = (cg.eta_start - cb * x1) / sb;
      const double x2_lo = (sb * x1 - geom_.chi10 - cap.channel_halfwidth) / cb;
      const double x2_hi = (sb * x1 - geom_.chi10 + cap.channel_halfwidth) / cb;
      const double lo = std::max(x2_eta, x2_lo);
      const long j0 = std::max(0L, (long)std::ceil((lo - grid_.q2_min) / grid_.dx2));
      const long j1 = std::min((long)grid_.n2 - 1,
                               (long)std::floor((x2_hi - grid_.q2_min) / grid_.dx2));
      if (j1 >= j0) {
        ZoneSpan span{i * grid_.n2 + std::size_t(j0), std::size_t(j1 - j0 + 1),
                      damp_half_.size()};
        for (long j = j0; j <= j1; ++j) {
          const double eta = geom_.eta1(x1, grid_.x2(std::size_t(j)));
          damp_half_.push_back(damp_factor((eta - cg.eta_start) / cap.width));
        }
        zones_product_.push_back(span);
      }
    }
  }
}

bool Propagator::in_cap_zone(double sim_q1, double sim_q2) const {
  return point_in_cap(cap_geometry(grid_, geom_, cap_), geom_, cap_, sim_q1,
                      sim_q2);
}

void Propagator::step(Wavefunction& psi) {
  if (psi.amp.size() != grid_.size())
    throw validation_error("Propagator: wavefunction grid mismatch");
  const double da = grid_.cell_area();
  auto half = [&] {
    kernels::cmul(psi.amp.data(), phase_half_.data(), psi.amp.size());
    for (const ZoneSpan& z : zones_reactant_)
      ledger_.absorbed_reactant +=
          kernels::damp(psi.amp.data() + z.offset, damp_half_.data() + z.factors,
                        z.len) * da;
    for (const ZoneSpan& z : zones_product_)
      ledger_.absorbed_product +=
          kernels::damp(psi.amp.data() + z.offset, damp_half_.data() + z.factors,
                        z.len) * da;
  };
  half();
  plan_.forward_transposed(psi.amp.data(), spec_.data());
  kernels::cmul(spec_.data(), kinetic_t_.data(), spec_.size());
  plan_.inverse_transposed(spec_.data(), psi.amp.data());
  half();
  psi.time += dt_;
}

double Propagator::kinetic_expectation(const Wavefunction& psi) const {
  std::vector<cdouble> spec = psi.amp;
  fft::Plan2D plan(grid_.n1, grid_.n2);
  plan.forward(spec.data());
  const double dk1 = 2.0 * pi / (double(grid_.n1) * grid_.dx1);
  const double dk2 = 2.0 * pi / (double(grid_.n2) * grid_.dx2);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid_.n1; ++i) {
    const double f1 = i < grid_.n1 / 2 ? double(i) : double(i) - double(grid_.n1);
    const double k1 = f1 * dk1;
    for (std::size_t j = 0; j < grid_.n2; ++j) {
      const double f2 = j < grid_.n2 / 2 ? double(j) : double(j) - double(grid_.n2);
      const double k2 = f2 * dk2;
      const double w = std::norm(spec[i * grid_.n2 + j]);
      num += w * (k1 * k1 + k2 * k2);
      den += w;
    }
  }
  return hbar * hbar * num / (2.0 * m_tilde_ * den);
}

double Propagator::potential_expectation(const Wavefunction& psi) const {
  double num = 0.0, den = 0.0;
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    const double w = std::norm(psi.amp[idx]);
    num += w * v_[idx];
    den += w;
  }
  return num / den;
}

double Propagator::energy_expectation(const Wavefunction& psi) const {
  return kinetic_expectation(psi) + potential_expectation(psi);
}

double Propagator::mean_velocity(const Wavefunction& psi, Channel channel) const {
  std::vector<cdouble> spec = psi.amp;
  fft::Plan2D plan(grid_.n1, grid_.n2);
  plan.forward(spec.data());
  const double dk1 = 2.0 * pi / (double(grid_.n1) * grid_.dx1);
  const double dk2 = 2.0 * pi / (double(grid_.n2) * grid_.dx2);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid_.n1; ++i) {
    const double f1 = i < grid_.n1 / 2 ? double(i) : double(i) - double(grid_.n1);
    const double k1 = f1 * dk1;
    for (std::size_t j = 0; j < grid_.n2; ++j) {
      const double f2 = j < grid_.n2 / 2 ? double(j) : double(j) - double(grid_.n2);
      const double k2 = f2 * dk2;
      const double kpar = channel == Channel::reactant
                              ? k1
                              : geom_.cos_beta * k1 + geom_.sin_beta * k2;
      const double w = std::norm(spec[i * grid_.n2 + j]);
      num += w * kpar;
      den += w;
    }
  }
  return hbar * num / (m_tilde_ * den);
}

RunResult propagate(Propagator& prop, Wavefunction& psi, const Schedule& sched,
                    const SnapshotHook& on_snapshot, const StepHook& per_step) {
  if (sched.n_steps < 0)
    throw validation_error("propagate: n_steps must be >= 0");
  RunResult result;
  result.initial_norm = psi.norm();
  const RunLedger start = prop.ledger();

  auto record = [&](long step) {
    result.series.push_back({step, psi.time, psi.norm(),
                             prop.ledger().absorbed_reactant - start.absorbed_reactant,
                             prop.ledger().absorbed_product - start.absorbed_product});
  };
  record(0);
  if (on_snapshot) on_snapshot(psi, 0);

  for (long s = 1; s <= sched.n_steps; ++s) {
    prop.step(psi);
    if (per_step) per_step(psi, s);
    const bool at_stride = sched.snapshot_stride > 0 && s % sched.snapshot_stride == 0;
    if (at_stride || s == sched.n_steps) {
      record(s);
      if (on_snapshot && at_stride && s != sched.n_steps) on_snapshot(psi, s);
    }
  }
  if (on_snapshot && sched.n_steps > 0) on_snapshot(psi, sched.n_steps);

  result.ledger.absorbed_reactant =
      prop.ledger().absorbed_reactant - start.absorbed_reactant;
  result.ledger.absorbed_product =
      prop.ledger().absorbed_product - start.absorbed_product;
  result.final_norm = psi.norm();

  const double books = result.final_norm + result.ledger.absorbed_reactant +
                       result.ledger.absorbed_product;
  if (std::abs(books - result.initial_norm) > 1e-6)
    throw numerical_error("propagate: probability bookkeeping violated");
  return result;
}

}  // namespace reactwave
