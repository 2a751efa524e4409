#include "reactwave/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reactwave {

const char* fit_parameter_name(FitParameter p) {
  switch (p) {
    case FitParameter::sato_delta: return "delta";
    case FitParameter::d_ab: return "d_ab";
    case FitParameter::d_bc: return "d_bc";
    case FitParameter::d_ac: return "d_ac";
    case FitParameter::beta_ab: return "beta_ab";
    case FitParameter::beta_bc: return "beta_bc";
    case FitParameter::beta_ac: return "beta_ac";
  }
  return "?";
}

std::optional<FitParameter> fit_parameter_from_name(const std::string& name) {
  for (FitParameter p : {FitParameter::sato_delta, FitParameter::d_ab,
                         FitParameter::d_bc, FitParameter::d_ac,
                         FitParameter::beta_ab, FitParameter::beta_bc,
                         FitParameter::beta_ac})
    if (name == fit_parameter_name(p)) return p;
  return std::nullopt;
}

const char* observable_name(Observable o) {
  switch (o) {
    case Observable::barrier_height: return "barrier_height";
    case Observable::exoergicity: return "exoergicity";
    case Observable::product_branching: return "product_branching";
  }
  return "?";
}

std::optional<Observable> observable_from_name(const std::string& name) {
  for (Observable o : {Observable::barrier_height, Observable::exoergicity,
                       Observable::product_branching})
    if (name == observable_name(o)) return o;
  return std::nullopt;
}

void FitProblem::validate() const {
  if (objective.empty())
    throw validation_error("FitProblem: at least one objective term required");
  for (const auto& p : params) {
    if (!(p.lower < p.upper))
      throw validation_error("FitProblem: parameter bounds must satisfy lo < hi");
    if (p.which == FitParameter::sato_delta && !(p.lower > -1.0))
      throw validation_error("FitProblem: Sato bounds must stay > -1");
    if (p.which != FitParameter::sato_delta && !(p.lower > 0.0))
      throw validation_error("FitProblem: D and beta bounds must stay > 0");
  }
  for (const auto& t : objective) {
    if (t.observable == Observable::product_branching && !branching)
      throw validation_error(
          "FitProblem: product_branching requires a propagation preset");
    if (t.observable != Observable::product_branching && t.target == 0.0)
      throw validation_error("FitProblem: relative residual needs target != 0");
  }
}

LepsSurface FitProblem::surface_at(const std::vector<double>& x) const {
  if (x.size() != params.size())
    throw validation_error("FitProblem: parameter vector size mismatch");
  DiatomSpec ab = base.ab(), bc = base.bc(), ac = base.ac();
  double delta = base.sato();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double v = x[i];
    switch (params[i].which) {
      case FitParameter::sato_delta: delta = v; break;
      case FitParameter::d_ab: ab.dissociation_energy = v; break;
      case FitParameter::d_bc: bc.dissociation_energy = v; break;
      case FitParameter::d_ac: ac.dissociation_energy = v; break;
      case FitParameter::beta_ab: ab.beta_morse = v; break;
      case FitParameter::beta_bc: bc.beta_morse = v; break;
      case FitParameter::beta_ac: ac.beta_morse = v; break;
    }
  }
  return {ab, bc, ac, delta};
}

namespace {

double observable_value(const FitProblem& problem, const LepsSurface& surface,
                        Observable o, bool* penalty) {
  switch (o) {
    case Observable::barrier_height: {
      double g1 = problem.saddle_guess_q1, g2 = problem.saddle_guess_q2;
      if (g1 <= 0.0) g1 = 2.0 * surface.ab().equilibrium_distance;
      if (g2 <= 0.0) g2 = 1.1 * surface.bc().equilibrium_distance;
      // factors/scaling only feed the sim-frame echo of the location
      const MassFactors f{1.0, 1.0, 0.7853981633974483};
      const ScalingParams s{1.0, 1.0};
      try {
        return find_saddle(surface, g1, g2, f, s).barrier;
      } catch (const numerical_error&) {
        if (penalty) *penalty = true;
        return fit_penalty_value;
      }
    }
    case Observable::exoergicity: {
      // asymptotic valley depth difference, product minus reactant release
      const double far1 = 60.0 * surface.ab().equilibrium_distance;
      const double far2 = 60.0 * surface.bc().equilibrium_distance;
      const double reactant_floor =
          surface.energy(far1, surface.bc().equilibrium_distance);
      // product valley floor: minimize over q1 near the AB equilibrium
      double best = surface.energy(surface.ab().equilibrium_distance, far2);
      for (int k = -40; k <= 40; ++k) {
        const double q1 = surface.ab().equilibrium_distance *
                          (1.0 + 0.002 * double(k));
        best = std::min(best, surface.energy(q1, far2));
      }
      return reactant_floor - best;
    }
    case Observable::product_branching: {
      const BranchingPreset& bp = *problem.branching;
      const SimChannelGeometry geom =
          channel_geometry(surface, bp.masses, bp.scaling);
      const ScaledSurface scaled(surface, mass_factors(bp.masses), bp.scaling);
      try {
        Propagator prop(bp.grid, scaled, geom, bp.cap, bp.schedule.dt);
        Wavefunction psi = init_wavepacket(bp.packet, bp.grid, geom, bp.cap,
                                           &scaled);
        Schedule sched = bp.schedule;
        sched.snapshot_stride = 0;
        const RunResult r = propagate(prop, psi, sched);
        return r.ledger.absorbed_product;
      } catch (const error&) {
        // extreme trial parameters can invalidate the preset geometry
        if (penalty) *penalty = true;
        return fit_penalty_value;
      }
    }
  }
  return 0.0;
}

}  // namespace

double evaluate_objective(const FitProblem& problem, const std::vector<double>& x,
                          bool* penalty) {
  problem.validate();
  std::vector<double> clipped = x;
  for (std::size_t i = 0; i < problem.params.size(); ++i)
    clipped[i] = std::clamp(clipped[i], problem.params[i].lower,
                            problem.params[i].upper);
  const LepsSurface surface = problem.surface_at(clipped);
  double total = 0.0;
  for (const ObjectiveTerm& t : problem.objective) {
    const double v = observable_value(problem, surface, t.observable, penalty);
    if (v == fit_penalty_value) {
      // keep the remaining terms informative instead of flattening everything
      total += t.weight * fit_penalty_value;
      continue;
    }
    const double scale = t.target != 0.0 ? t.target : 1.0;
    const double r = (v - t.target) / scale;
    total += t.weight * r * r;
  }
  return total;
}

FitResult fit(const FitProblem& problem, const std::vector<double>& x0,
              const FitOptions& opts) {
  problem.validate();
  const std::size_t dim = problem.params.size();
  if (x0.size() != dim)
    throw validation_error("fit: initial point dimension mismatch");

  FitResult result;
  result.penalty_hit = false;
  if (problem.branching)
    result.preset_note = "branching preset: " +
                         std::to_string(problem.branching->grid.n1) + "x" +
                         std::to_string(problem.branching->grid.n2) + " grid, " +
                         std::to_string(problem.branching->schedule.n_steps) +
                         " steps";

  auto clip = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = std::clamp(x[i], problem.params[i].lower, problem.params[i].upper);
  };

  int evals = 0;
  auto feval = [&](std::vector<double> x) {
    clip(x);
    ++evals;
    bool pen = false;
    const double v = evaluate_objective(problem, x, &pen);
    if (pen) result.penalty_hit = true;
    return v;
  };

  if (dim == 0) {
    result.parameters = {};
    result.objective = feval({});
    result.evaluations = evals;
    result.converged = true;
    return result;
  }

  // initial simplex: offset each vertex toward the farther bound so the
  // probe crosses informative territory even when x0 sits on a plateau
  std::vector<std::vector<double>> pts(dim + 1, x0);
  for (std::size_t i = 0; i < dim + 1; ++i) clip(pts[i]);
  for (std::size_t i = 0; i < dim; ++i) {
    const double lo = problem.params[i].lower;
    const double hi = problem.params[i].upper;
    const double toward = (pts[0][i] - lo > hi - pts[0][i]) ? lo : hi;
    pts[i + 1][i] += opts.initial_step * (toward - pts[0][i]);
    clip(pts[i + 1]);
  }
  std::vector<double> f(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) f[i] = feval(pts[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(dim + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> f2;
    for (std::size_t k : idx) {
      p2.push_back(pts[k]);
      f2.push_back(f[k]);
    }
    pts = std::move(p2);
    f = std::move(f2);
  };

  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) {
        const double scale = std::max(std::abs(pts[0][k]), 1e-12);
        d = std::max(d, std::abs(pts[i][k] - pts[0][k]) / scale);
      }
    return d;
  };

  order();
  while (evals < opts.max_evaluations) {
    if (f[0] < opts.objective_tolerance || diameter() < opts.simplex_tolerance)
      break;
    // centroid of all but worst
    std::vector<double> cen(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) cen[k] += pts[i][k];
    }
    for (double& c : cen) c /= double(dim);

    auto blend = [&](double t) {
      std::vector<double> x(dim);
      for (std::size_t k = 0; k < dim; ++k)
        x[k] = cen[k] + t * (pts[dim][k] - cen[k]);
      return x;
    };

    const auto reflected = blend(-1.0);
    const double fr = feval(reflected);
    if (fr < f[0]) {
      const auto expanded = blend(-2.0);
      const double fe = feval(expanded);
      if (fe < fr) {
        pts[dim] = expanded;
        f[dim] = fe;
      } else {
        pts[dim] = reflected;
        f[dim] = fr;
      }
    } else if (fr < f[dim - 1]) {
      pts[dim] = reflected;
      f[dim] = fr;
    } else {
      const auto contracted = blend(fr < f[dim] ? -0.5 : 0.5);
      const double fc = feval(contracted);
      if (fc < std::min(fr, f[dim])) {
        pts[dim] = contracted;
        f[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t k = 0; k < dim; ++k)
            pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
          f[i] = feval(pts[i]);
        }
      }
    }
    order();
  }

  result.parameters = pts[0];
  result.objective = f[0];
  result.evaluations = evals;
  result.converged = f[0] < opts.objective_tolerance ||
                     diameter() < opts.simplex_tolerance;
  return result;
}

}  // namespace reactwave
