#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reactwave/analysis.hpp"
#include "reactwave/frames.hpp"

namespace reactwave {

enum class FitParameter {
  sato_delta,
  d_ab, d_bc, d_ac,
  beta_ab, beta_bc, beta_ac,
};

const char* fit_parameter_name(FitParameter p);
std::optional<FitParameter> fit_parameter_from_name(const std::string& name);

enum class Observable { barrier_height, exoergicity, product_branching };

const char* observable_name(Observable o);
std::optional<Observable> observable_from_name(const std::string& name);

struct FitParamSpec {
  FitParameter which;
  double lower, upper;  // clipped-projection bounds
};

struct ObjectiveTerm {
  Observable observable;
  double target;
  double weight = 1.0;
};

// Reduced-resolution propagation preset used by the product_branching
// observable; recorded in FitResult for reproducibility.
struct BranchingPreset {
  MassTriple masses;
  ScalingParams scaling;
  Grid2D grid;
  WavePacketSpec packet;
  CapSpec cap;
  Schedule schedule;
  double saddle_guess_q1, saddle_guess_q2;
};

struct FitProblem {
  LepsSurface base;
  std::vector<FitParamSpec> params;
  std::vector<ObjectiveTerm> objective;
  // needed by barrier_height; defaults to 2x the pair equilibria
  double saddle_guess_q1 = 0.0, saddle_guess_q2 = 0.0;
  std::optional<BranchingPreset> branching;

  void validate() const;
  LepsSurface surface_at(const std::vector<double>& x) const;
};

struct FitOptions {
  int max_evaluations = 2000;
  double simplex_tolerance = 1e-8;    // relative simplex diameter
  double objective_tolerance = 1e-12;
  double initial_step = 0.25;         // relative to parameter magnitude
};

struct FitResult {
  std::vector<double> parameters;
  double objective = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool penalty_hit = false;  // a saddle search failed during the run
  std::string preset_note;
};

// Large documented constant returned when an observable evaluation fails
// (e.g. the saddle search diverges at extreme parameters).
inline constexpr double fit_penalty_value = 1e12;

// Weighted sum of squared relative residuals at x (clipped to bounds).
double evaluate_objective(const FitProblem& problem, const std::vector<double>& x,
                          bool* penalty = nullptr);

// Derivative-free Nelder-Mead with projection onto the bounds.
FitResult fit(const FitProblem& problem, const std::vector<double>& x0,
              const FitOptions& opts = {});

}  // namespace reactwave
