#pragma once
#include <string>
#include <vector>

#include "qlm/lattice.hpp"
#include "qlm/linalg.hpp"

namespace qlm {

inline constexpr int kSpectralMaxDim = 2500;

struct GroundState {
  double energy;
  double gap;
  Vec state;
};

// unique ground state, phase fixed so the largest component is positive
GroundState ground_state(const SpMat& H);

// ground state searched among C-even states only. With the sign change
// (-1)^{#flipped links} every hopping element is negative, so Perron-Frobenius
// makes the true ground state unique and C-even for J > 0; this resolves the
// two vacua whose splitting ~ (J/m)^N falls below the degeneracy guard.
// gap is the in-sector gap.
GroundState symmetric_ground_state(const SpMat& H, const GaugeBasis& basis);

enum class PropMethod { Auto, Spectral, Krylov };

class Propagator {
 public:
  explicit Propagator(const SpMat& H, PropMethod method = PropMethod::Auto);

  bool spectral() const { return spectral_; }
  const EigenSystem& eigensystem() const { return es_; }

  // psi(t) for ascending nonnegative times
  std::vector<CVec> evolve(const CVec& psi0, const std::vector<double>& times) const;

 private:
  SpMat H_;
  bool spectral_;
  EigenSystem es_;
};

struct QuenchResult {
  std::vector<double> times;  // t*m
  std::vector<cplx> amplitude;
  std::vector<double> echo;
  std::vector<double> rate;
  std::vector<double> sigma0z;
};

struct QuenchSetup {
  GaugeBasis basis;
  SpMat H_pre, H_post;
  GroundState gs;
  double time_scale;  // physical t = t_m * time_scale
};

QuenchSetup prepare_quench(const LatticeConfig& cfg);

// physical time grid from t*m values
std::vector<double> physical_times(const std::vector<double>& tm, double mass);

QuenchResult loschmidt_trace(const LatticeConfig& cfg, const std::vector<double>& tm,
                             PropMethod method = PropMethod::Auto);

struct ObservableTrace {
  Mat sigma_z;  // rows: time, cols: site
  Mat link_z;
  Mat sigma_x;
  Mat sigma_y;
};

ObservableTrace observables_trace(const std::vector<CVec>& states, const GaugeBasis& basis);

struct Axis {
  std::string label;
  std::vector<double> values;
};

struct ScanGrid {
  Axis x, y;
  CMat samples;  // (x index, y index)

  void validate() const;
};

std::vector<double> linspace_step(double lo, double hi, double step);

// one quench per J/m column, m = 1; threads <= 0 picks hardware concurrency
ScanGrid loschmidt_scan(int n_sites, const std::vector<double>& j_over_m, const std::vector<double>& tm,
                        int threads = 0);

// runs fn(i) for i in [0,n) on a small worker pool, results placed by index
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace qlm
