#include "qlm/readout.hpp"

#include <cmath>
#include <limits>

namespace qlm {

void ReadoutConfig::validate() const {
  if (!(g_r > 0)) throw ConfigError("g_r must be positive");
  if (probe != 0 && probe != 1) throw ConfigError("probe must be 0 or 1");
  if (!(resolution > 0)) throw ConfigError("resolution must be positive");
  for (size_t i = 1; i < detuning.size(); ++i)
    if (!(detuning[i] > detuning[i - 1])) throw ConfigError("detuning grid must be strictly ascending");
}

std::string state_label(int s) {
  return std::string{char('0' + ((s >> 2) & 1)), char('0' + ((s >> 1) & 1)), char('0' + (s & 1))};
}

double conditioned_frequency(const SpinModelParams& s, int probe, int state) {
  const double z0 = (state >> 2) & 1 ? -1 : 1, zg = (state >> 1) & 1 ? -1 : 1, z1 = state & 1 ? -1 : 1;
  // probe 1 is probe 0 with the 0 <-> 1 labels swapped
  if (probe == 0) return s.Omega0 - 2 * (s.Jz_0g * zg + s.Jz_01 * z1 + s.Jz_0g1 * zg * z1);
  return s.Omega1 - 2 * (s.Jz_g1 * zg + s.Jz_01 * z0 + s.Jz_0g1 * zg * z0);
}

ShiftTable dispersive_shifts(const ReadoutConfig& cfg) {
  cfg.validate();
  const SpinModelParams& s = cfg.spin;
  const double Om = cfg.probe == 0 ? s.Omega0 : s.Omega1;
  const double al = cfg.probe == 0 ? s.alpha0 : s.alpha1;
  const double g2 = cfg.g_r * cfg.g_r, lim = cfg.g_r / 5;
  ShiftTable t;
  t.detuning = cfg.detuning;
  double shift[8], zp[8];
  for (int st = 0; st < 8; ++st) {
    shift[st] = conditioned_frequency(s, cfg.probe, st) - Om;
    zp[st] = ((st >> (cfg.probe == 0 ? 2 : 0)) & 1) ? -1 : 1;
    t.poles[st] = {-shift[st], -shift[st] - al};
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double d : cfg.detuning) {
    std::array<double, 8> chi;
    std::array<bool, 8> pole;
    bool ok = true;
    for (int st = 0; st < 8; ++st) {
      const double ds = d + shift[st];
      // denominators this small put chi far outside the dispersive band anyway
      pole[st] = std::abs(ds) < 1e-9 * cfg.g_r || std::abs(ds + al) < 1e-9 * cfg.g_r;
      if (pole[st]) {
        chi[st] = nan;
        ok = false;
        continue;
      }
      chi[st] = -g2 / (ds + al) - (g2 / ds - g2 / (ds + al)) * zp[st];
      ok = ok && std::abs(chi[st]) <= lim;
    }
    t.chi.push_back(chi);
    t.at_pole.push_back(pole);
    t.valid.push_back(ok);
  }
  return t;
}

std::vector<unsigned> separation_masks(const ShiftTable& t, double res) {
  std::vector<unsigned> m(t.chi.size(), 0u);
  for (size_t i = 0; i < t.chi.size(); ++i) {
    if (!t.valid[i]) continue;
    int bit = 0;
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b, ++bit)
        if (std::abs(t.chi[i][a] - t.chi[i][b]) >= res) m[i] |= 1u << bit;
  }
  return m;
}

WindowScan distinguishability_windows(const ReadoutConfig& cfg0, const ReadoutConfig& cfg1) {
  if (cfg0.probe != 0 || cfg1.probe != 1) throw ConfigError("windows need probe 0 and probe 1 configs");
  const ShiftTable t0 = dispersive_shifts(cfg0), t1 = dispersive_shifts(cfg1);
  const double res = std::max(cfg0.resolution, cfg1.resolution);
  const auto m0 = separation_masks(t0, res), m1 = separation_masks(t1, res);
  auto half = [](const std::vector<double>& v, size_t i, int side) {
    if (v.size() < 2) return 0.0;
    const size_t j = side < 0 ? (i == 0 ? 1 : i) : (i + 1 < v.size() ? i + 1 : i);
    return 0.5 * (v[j] - v[j - 1]);
  };
  WindowScan out;
  for (size_t i = 0; i < t0.detuning.size(); ++i) {
    if (m0[i] == kAllPairs) ++out.single0_cells;
    size_t j = 0;
    while (j < t1.detuning.size()) {
      auto good = [&](size_t k) { return t0.valid[i] && t1.valid[k] && (m0[i] | m1[k]) == kAllPairs; };
      if (!good(j)) { ++j; continue; }
      size_t k = j;
      while (k + 1 < t1.detuning.size() && good(k + 1)) ++k;
      out.joint_cells += long(k - j + 1);
      out.windows.push_back({t0.detuning[i] - half(t0.detuning, i, -1), t0.detuning[i] + half(t0.detuning, i, +1),
                             t1.detuning[j] - half(t1.detuning, j, -1), t1.detuning[k] + half(t1.detuning, k, +1)});
      j = k + 1;
    }
  }
  for (size_t k = 0; k < t1.detuning.size(); ++k)
    if (m1[k] == kAllPairs) ++out.single1_cells;
  return out;
}

}  // namespace qlm
