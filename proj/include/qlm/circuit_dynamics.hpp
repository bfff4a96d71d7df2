#pragma once
#include <string>
#include <vector>

#include "qlm/circuit.hpp"

namespace qlm {

// effective two-level parameters of the |110> <-> |001> resonance
struct EffectiveParams {
  double delta_eff = 0;  // rad/ns, E(from) - E(to) of the dressed pair
  double j_eff = 0;      // rad/ns, > 0
  double fit_residual = 0;
  double amplitude = 0;  // A in A sin^2(Omega t)
  double omega = 0;      // Omega
};

struct RabiFitOptions {
  int samples = 2000;
  double max_residual = 1e-3;
};

// thrown when the sine fit is poor; carries the raw transfer trace
struct FitError : NumericalError {
  std::vector<double> t, f;
  FitError(const std::string& what, std::vector<double> tt, std::vector<double> ff)
      : NumericalError(what), t(std::move(tt)), f(std::move(ff)) {}
};

// fit |<to|exp(-iHt)|from>|^2 = A sin^2(Omega t); the sign of delta comes from the
// dressed pair ordering, sign_hint only breaks an exact tie
EffectiveParams fit_rabi(const CMat& H, int from, int to, double sign_hint, const RabiFitOptions& opt = {});

EffectiveParams extract_effective_params(const CircuitParams& p, int n_levels = 4, const RabiFitOptions& opt = {});

// spin state index s = 4 b0 + 2 bg + b1 -> Fock index in the n-level product space
std::vector<int> spin_fock_indices(int n_levels);

struct H0Eff {
  Vec energies;      // 8 effective diagonal energies, spin order
  Vec r2;            // regression R^2 per state
  Vec min_survival;  // smallest |<s|s(t)>|^2 in the window
  std::vector<std::string> warnings;

  // zero-padded diagonal on the n-level product space
  CMat padded(int n_levels) const;
};

// phases of the 8 spin states under H, measured against diag(bare)
H0Eff phase_slope_energies(const CMat& H, const Vec& bare, int n_levels, double window = 50.0, int samples = 500);
// Es switched off; bare frame = diagonal of the two-level truncation
H0Eff extract_h0_eff(const CircuitParams& p, int n_levels = 4, double window = 50.0, int samples = 500);

// exp(+i H_ref t) exp(-i H_c t)
CMat rotating_evolution(const CMat& Hc, const CMat& Href, double t);

// -(m/2) s0z + (m/2) s1z + sign j (|110><001| + h.c.)
CMat target_hamiltonian(double mass, double j, int sign);

// (|tr U^dag M|^2 + tr M^dag M) / (d(d+1)); reduces to the Pauli-twirl form when M is unitary
double process_fidelity(const CMat& U, const CMat& M);
// sum over the 64 three-spin Pauli strings, for cross-checking
double process_fidelity_pauli(const CMat& U, const CMat& M);

struct FidelityTrace {
  std::vector<double> times;  // ns
  std::vector<double> avg_fidelity;
  std::vector<double> avg_fidelity_no_leakage;
  std::vector<double> leakage;
};

// projected circuit propagator in the frame exp(i (H0eff + (m/2)(s0z - s1z)) t)
FidelityTrace average_fidelity(const CMat& Hc, int n_levels, const Vec& h0eff, const CMat& Htarget, double mass,
                               const std::vector<double>& times);
FidelityTrace average_fidelity(const CircuitParams& p, const EffectiveParams& eff, const H0Eff& h0,
                               const std::vector<double>& times, int n_levels = 4);

}  // namespace qlm
