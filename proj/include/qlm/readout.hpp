#pragma once
#include <array>
#include <string>
#include <vector>

#include "qlm/circuit.hpp"

namespace qlm {

struct ReadoutConfig {
  SpinModelParams spin{};
  double g_r = 20 * kTwoPiMHz;
  int probe = 0;                   // 0 or 1
  std::vector<double> detuning;    // bare Omega_probe - omega_r, rad/ns
  double resolution = 1 * kTwoPiMHz;

  void validate() const;
};

// state-conditioned transition frequency of the probe spin; s = 4 b0 + 2 bg + b1
double conditioned_frequency(const SpinModelParams& s, int probe, int state);

struct ShiftTable {
  std::vector<double> detuning;
  std::vector<std::array<double, 8>> chi;   // NaN where flagged
  std::vector<std::array<bool, 8>> at_pole;
  std::vector<bool> valid;                  // all |chi| <= g_r / 5 and no pole
  std::array<std::array<double, 2>, 8> poles;  // bare detunings where Delta_state = 0 and = -alpha
};

ShiftTable dispersive_shifts(const ReadoutConfig& cfg);

// bit (a,b) set when |chi_a - chi_b| >= resolution at a valid point
std::vector<unsigned> separation_masks(const ShiftTable& t, double resolution);
inline constexpr unsigned kAllPairs = (1u << 28) - 1;

struct Window {
  double d0_lo, d0_hi, d1_lo, d1_hi;  // rad/ns
};

struct WindowScan {
  std::vector<Window> windows;
  long joint_cells = 0;   // grid points separating all 8 states jointly
  long single0_cells = 0;  // grid points where probe 0 alone separates all 8 states
  long single1_cells = 0;
};

// rectangles of (Delta0, Delta1) where both probes are dispersive and the pair of shifts separates all states
WindowScan distinguishability_windows(const ReadoutConfig& cfg0, const ReadoutConfig& cfg1);

std::string state_label(int state);  // bits b0 bg b1, "0" meaning sigma^z = +1

}  // namespace qlm
