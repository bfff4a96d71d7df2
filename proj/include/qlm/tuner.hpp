#pragma once
#include <array>
#include <functional>
#include <vector>

#include <json.hpp>

#include "qlm/circuit_dynamics.hpp"

namespace qlm {

struct Bounds {
  double lo, hi;
};

// free parameters in order C, C0, C1 (farads), E0, E1, Ec (rad/ns)
using FreeVec = std::array<double, 6>;

struct TuneSpec {
  double target_ratio = -2.0;         // J/m
  double target_mass = -2.0 / 49.5;   // rad/ns, t m = 2 at t = 49.5 ns
  double K = 1e-15;
  double Es = 0.5 * kTwoPiGHz;
  std::array<Bounds, 6> bounds = {{{1e-15, 500e-15}, {1e-15, 500e-15}, {1e-15, 500e-15},
                                   {10.0, 30000.0}, {10.0, 30000.0}, {10.0, 30000.0}}};
  FreeVec nominal = {8e-15, 30e-15, 32e-15, 3000.0, 6100.0, 110.0};
  double alpha_min = 450 * kTwoPiMHz;
  double hierarchy = 0.15;  // |Jz| <= h Omega_j, |Jx| <= h |alpha_j|
  double penalty = 1e3;
  int n_levels = 4;
  int starts = 8;
  int budget = 400;         // evaluations per start
  int polish_rounds = 3;    // simplex restarts of the best start, budget each
  double jitter = 0.05;     // log-normal spread of seeds past the first
  unsigned seed = 1;
  int threads = 0;

  void validate() const;
  double delta_target() const { return 2 * target_mass; }
  double j_target() const { return target_ratio * target_mass / 2; }
};

CircuitParams params_from_free(const TuneSpec& spec, const FreeVec& x);
FreeVec free_from_params(const CircuitParams& p);

// bare-formula start: |Jx| matched through E0, omega_{++-} = Delta* through E1
CircuitParams bare_seed(const TuneSpec& spec, int start_index = 0);

struct Objective {
  double value;
  double fit, penalty;
  bool fit_ok;
  EffectiveParams eff;
};

Objective tune_objective(const TuneSpec& spec, const CircuitParams& p);

struct SimplexResult {
  std::vector<double> x;
  double f;
  int evals;
  std::vector<double> trace;  // best value after each evaluation
};

// Nelder-Mead with standard coefficients; initial simplex x0 + step e_i
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          double step, int budget, double ftol = 1e-10);

struct StartReport {
  CircuitParams seed;
  CircuitParams best;
  double objective;
  int evals;
  std::vector<double> trace;
};

struct TuneResult {
  CircuitParams params;
  EffectiveParams eff;
  SpinModelParams spin;
  double objective;
  bool feasible;
  std::vector<std::string> diagnostics;
  std::vector<StartReport> starts;

  nlohmann::json report(const TuneSpec& spec) const;
};

TuneResult tune(const TuneSpec& spec);

// constraint violations at p (empty when feasible)
std::vector<std::string> constraint_diagnostics(const TuneSpec& spec, const SpinModelParams& s);

}  // namespace qlm
