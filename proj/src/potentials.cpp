#include "reactwave/potentials.hpp"

#include <cmath>
#include <string>

#include "reactwave/constants.hpp"

namespace reactwave {

namespace {

void require_finite(double q, const char* what) {
  if (!std::isfinite(q))
    throw validation_error(std::string(what) + ": coordinate must be finite");
}

}  // namespace

void DiatomSpec::validate() const {
  if (!(dissociation_energy >= 0.0) || !std::isfinite(dissociation_energy))
    throw validation_error("DiatomSpec: dissociation energy must be >= 0");
  if (!(beta_morse > 0.0)) throw validation_error("DiatomSpec: beta must be > 0");
  if (!(equilibrium_distance > 0.0))
    throw validation_error("DiatomSpec: equilibrium distance must be > 0");
  if (!(reduced_mass > 0.0))
    throw validation_error("DiatomSpec: reduced mass must be > 0");
}

double DiatomSpec::force_constant() const {
  return 2.0 * dissociation_energy * beta_morse * beta_morse;
}

double morse_energy(const DiatomSpec& spec, double q) {
  require_finite(q, "morse_energy");
  const double e = std::exp(-spec.beta_morse * (q - spec.equilibrium_distance));
  const double u = 1.0 - e;
  return spec.dissociation_energy * u * u;
}

HarmonicParams harmonic_params(const DiatomSpec& spec) {
  spec.validate();
  const double k = spec.force_constant();
  return {k, std::sqrt(k / spec.reduced_mass) / (2.0 * constants::pi)};
}

LepsSurface::LepsSurface(DiatomSpec ab, DiatomSpec bc, DiatomSpec ac,
                         double sato_delta)
    : diatoms_{ab, bc, ac}, delta_(sato_delta) {
  for (const auto& d : diatoms_) d.validate();
  if (!(delta_ > -1.0))
    throw validation_error("LepsSurface: Sato parameter must be > -1");
  double dmax = 0.0;
  for (const auto& d : diatoms_)
    dmax = std::max(dmax, d.dissociation_energy);
  eps_rad_ = 1e-12 * dmax * dmax;
}

const DiatomSpec& LepsSurface::diatom(int pair) const {
  if (pair < 1 || pair > 3)
    throw validation_error("LepsSurface: pair index must be 1, 2 or 3");
  return diatoms_[pair - 1];
}

double LepsSurface::channel_asymptote(int pair) const {
  return -diatom(pair).dissociation_energy;
}

// Pairwise Coulomb (U) and exchange (A) integrals with derivatives in the
// pair distance, up to the requested order.
struct LepsSurface::Terms {
  std::array<double, 3> u, up, upp;
  std::array<double, 3> a, ap, app;
  double radicand;
  double root;
};

LepsSurface::Terms LepsSurface::eval_terms(double q1, double q2,
                                           int order) const {
  require_finite(q1, "leps");
  require_finite(q2, "leps");
  Terms t{};
  const double q[3] = {q1, q2, q1 + q2};
  const double cu2 = 3.0 + delta_;
  const double cu1 = 2.0 + 6.0 * delta_;
  const double ca2 = 1.0 + 3.0 * delta_;
  const double ca1 = 6.0 + 2.0 * delta_;
  for (int i = 0; i < 3; ++i) {
    const DiatomSpec& d = diatoms_[i];
    const double b = d.beta_morse;
    const double x = std::exp(-b * (q[i] - d.equilibrium_distance));
    const double x2 = x * x;
    const double pre = 0.25 * d.dissociation_energy;
    t.u[i] = pre * (cu2 * x2 - cu1 * x);
    t.a[i] = pre * (ca2 * x2 - ca1 * x);
    if (order >= 1) {
      t.up[i] = pre * b * (-2.0 * cu2 * x2 + cu1 * x);
      t.ap[i] = pre * b * (-2.0 * ca2 * x2 + ca1 * x);
    }
    if (order >= 2) {
      t.upp[i] = pre * b * b * (4.0 * cu2 * x2 - cu1 * x);
      t.app[i] = pre * b * b * (4.0 * ca2 * x2 - ca1 * x);
    }
  }
  const auto& a = t.a;
  t.radicand = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] - a[0] * a[1] -
               a[1] * a[2] - a[0] * a[2];
  if (t.radicand < -eps_rad_)
    throw numerical_error("leps: radicand below -eps_rad; inconsistent surface");
  t.root = std::sqrt(t.radicand > 0.0 ? t.radicand : 0.0);
  return t;
}

double LepsSurface::energy(double q1, double q2) const {
  const Terms t = eval_terms(q1, q2, 0);
  return (t.u[0] + t.u[1] + t.u[2] - t.root) / (1.0 + delta_);
}

namespace {
// dq_i/dq_k for q = (q1, q2, q1+q2)
constexpr double kChain[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
}  // namespace

std::array<double, 2> LepsSurface::gradient(double q1, double q2) const {
  const Terms t = eval_terms(q1, q2, 1);
  if (t.radicand <= eps_rad_)
    throw numerical_error("leps: gradient undefined at radicand cusp");
  // dR/da_i = 2 a_i - sum_{j != i} a_j
  double g[3];
  const double asum = t.a[0] + t.a[1] + t.a[2];
  for (int i = 0; i < 3; ++i) g[i] = 3.0 * t.a[i] - asum;
  std::array<double, 2> out{};
  for (int k = 0; k < 2; ++k) {
    double du = 0.0, dr = 0.0;
    for (int i = 0; i < 3; ++i) {
      du += t.up[i] * kChain[i][k];
      dr += g[i] * t.ap[i] * kChain[i][k];
    }
    out[k] = (du - dr / (2.0 * t.root)) / (1.0 + delta_);
  }
  return out;
}

std::array<double, 4> LepsSurface::hessian(double q1, double q2) const {
  const Terms t = eval_terms(q1, q2, 2);
  if (t.radicand <= eps_rad_)
    throw numerical_error("leps: hessian undefined at radicand cusp");
  double g[3];
  const double asum = t.a[0] + t.a[1] + t.a[2];
  for (int i = 0; i < 3; ++i) g[i] = 3.0 * t.a[i] - asum;

  double ds[2];  // dS/dq_k with S = sqrt(radicand)
  for (int k = 0; k < 2; ++k) {
    double dr = 0.0;
    for (int i = 0; i < 3; ++i) dr += g[i] * t.ap[i] * kChain[i][k];
    ds[k] = dr / (2.0 * t.root);
  }

  std::array<double, 4> h{};
  for (int k = 0; k < 2; ++k) {
    for (int m = k; m < 2; ++m) {
      double apsum_m = 0.0;
      for (int j = 0; j < 3; ++j) apsum_m += t.ap[j] * kChain[j][m];
      double cross = 0.0, duu = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double dg_im = 3.0 * t.ap[i] * kChain[i][m] - apsum_m;
        cross += dg_im * t.ap[i] * kChain[i][k] +
                 g[i] * t.app[i] * kChain[i][k] * kChain[i][m];
        duu += t.upp[i] * kChain[i][k] * kChain[i][m];
      }
      const double d2s = -ds[k] * ds[m] / t.root + cross / (2.0 * t.root);
      const double val = (duu - d2s) / (1.0 + delta_);
      h[k * 2 + m] = val;
      h[m * 2 + k] = val;
    }
  }
  return h;
}

}  // namespace reactwave
