#include <doctest.h>

#include <cmath>

#include "qlm/readout.hpp"

using namespace qlm;

namespace {

SpinModelParams sample_spin() {
  SpinModelParams s{};
  s.Omega0 = 43675 * kTwoPiMHz;
  s.Omegag = 18206 * kTwoPiMHz;
  s.Omega1 = 61837 * kTwoPiMHz;
  s.Jz_0g = -26.26 * kTwoPiMHz;
  s.Jz_01 = -1.478 * kTwoPiMHz;
  s.Jz_g1 = -16.47 * kTwoPiMHz;
  s.Jz_0g1 = -0.0991 * kTwoPiMHz;
  s.alpha0 = -600 * kTwoPiMHz;
  s.alphag = -500 * kTwoPiMHz;
  s.alpha1 = -700 * kTwoPiMHz;
  return s;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("conditioned frequencies") {
  const SpinModelParams s = sample_spin();
  // probe 0 ignores its own state; probe 1 is the relabelled copy
  for (int st = 0; st < 8; ++st) {
    CHECK(conditioned_frequency(s, 0, st) == conditioned_frequency(s, 0, st ^ 4));
    CHECK(conditioned_frequency(s, 1, st) == conditioned_frequency(s, 1, st ^ 1));
  }
  SpinModelParams r = s;
  std::swap(r.Omega0, r.Omega1);
  std::swap(r.Jz_0g, r.Jz_g1);
  for (int st = 0; st < 8; ++st) {
    const int swapped = ((st & 1) << 2) | (st & 2) | ((st >> 2) & 1);
    CHECK(conditioned_frequency(r, 1, swapped) == doctest::Approx(conditioned_frequency(s, 0, st)).epsilon(1e-15));
  }
  CHECK(conditioned_frequency(s, 0, 0) == doctest::Approx(s.Omega0 - 2 * (s.Jz_0g + s.Jz_01 + s.Jz_0g1)));
  CHECK(state_label(6) == "110");
}

TEST_CASE("dispersive shifts") {
  ReadoutConfig c;
  c.spin = sample_spin();
  c.detuning = {-5000 * kTwoPiMHz, 1e6, 2e6};
  const ShiftTable t = dispersive_shifts(c);
  // far detuned: shifts vanish
  for (int st = 0; st < 8; ++st) CHECK(std::abs(t.chi[2][st]) < 1e-6);
  // chi_up + chi_down = -2 g^2/(Delta + alpha) at the shared conditioned detuning
  const double g2 = c.g_r * c.g_r;
  for (int st = 0; st < 4; ++st) {
    const double ds = c.detuning[0] + conditioned_frequency(c.spin, 0, st) - c.spin.Omega0;
    CHECK(t.chi[0][st] + t.chi[0][st ^ 4] == doctest::Approx(-2 * g2 / (ds + c.spin.alpha0)).epsilon(1e-12));
    CHECK(t.chi[0][st] == doctest::Approx(-g2 / ds).epsilon(1e-12));
  }
  CHECK(t.valid[2]);
}

TEST_CASE("poles are flagged") {
  ReadoutConfig c;
  c.spin = sample_spin();
  const ShiftTable probe = dispersive_shifts(c);
  const double p0 = probe.poles[3][0], p1 = probe.poles[3][1];
  c.detuning = {p0, p1, p1 + 1.0};
  const ShiftTable t = dispersive_shifts(c);
  CHECK(t.at_pole[0][3]);
  CHECK(t.at_pole[0][7]);
  CHECK(std::isnan(t.chi[0][3]));
  CHECK(!t.valid[0]);
  CHECK(t.at_pole[1][3]);
  CHECK(!t.at_pole[2][3]);
}

TEST_CASE("separation masks and windows") {
  ReadoutConfig c0, c1;
  c0.spin = c1.spin = sample_spin();
  c1.probe = 1;
  // coarse resolution finer than any shift difference is impossible far away
  c0.detuning = grid(1e4, 2e4, 5);
  c1.detuning = grid(1e4, 2e4, 5);
  const WindowScan far = distinguishability_windows(c0, c1);
  CHECK(far.windows.empty());
  CHECK(far.joint_cells == 0);

  c0.detuning = grid(-400 * kTwoPiMHz, 400 * kTwoPiMHz, 161);
  c1.detuning = c0.detuning;
  const WindowScan w = distinguishability_windows(c0, c1);
  long cells = 0;
  for (const auto& win : w.windows) {
    CHECK(win.d0_lo < win.d0_hi);
    CHECK(win.d1_lo < win.d1_hi);
    cells += 1;
  }
  CHECK(w.joint_cells >= cells);
  CHECK_THROWS_AS(distinguishability_windows(c1, c0), ConfigError);

  ReadoutConfig bad = c0;
  bad.detuning = {1.0, 0.5};
  CHECK_THROWS_AS(dispersive_shifts(bad), ConfigError);
  bad = c0;
  bad.probe = 2;
  CHECK_THROWS_AS(dispersive_shifts(bad), ConfigError);
}

TEST_CASE("mask bits") {
  ShiftTable t;
  t.chi = {{0, 1, 2, 3, 4, 5, 6, 7}, {0, 0, 0, 0, 0, 0, 0, 0}};
  t.valid = {true, true};
  const auto m = separation_masks(t, 0.5);
  CHECK(m[0] == kAllPairs);
  CHECK(m[1] == 0u);
  t.valid[0] = false;
  CHECK(separation_masks(t, 0.5)[0] == 0u);
}
