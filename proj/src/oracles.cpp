#include "qlm/oracles.hpp"

#include <bit>
#include <cmath>

namespace qlm {

N2Solution n2_solution(double m, double J) {
  if (!(J > 0)) throw ConfigError("n2_solution needs J > 0");
  N2Solution s{};
  s.m = m;
  s.J = J;
  s.y = m / J;
  s.x = J / m;
  const double r = std::sqrt(4 * s.y * s.y + 2);
  s.p[0] = 2 * s.y + r;
  s.p[1] = 2 * s.y - r;
  for (int i = 0; i < 2; ++i) {
    // normalised through 2a^2 + b^2 = 1
    s.a[i] = 1.0 / std::sqrt(2.0 + s.p[i] * s.p[i]);
    s.b[i] = s.p[i] * s.a[i];
    s.energy[i] = -m + J * s.p[i] / 2;
  }
  s.energy_minus = -m;
  return s;
}

Mat N2Solution::eigenvectors() const {
  Mat V(3, 3);
  for (int i = 0; i < 2; ++i) V.col(i) << a[i], b[i], a[i];
  V.col(2) << 1 / std::sqrt(2.0), 0, -1 / std::sqrt(2.0);
  return V;
}

Vec N2Solution::energies() const { return Vec{{energy[0], energy[1], energy_minus}}; }

double n2_zero_time(double m, double J, int n) { return (2 * n + 1) * kPi / std::sqrt(4 * m * m + 2 * J * J); }

std::vector<LoschmidtZero> n2_loschmidt_zeros(double m, int n_first, int n_last) {
  if (!(m > 0)) throw ConfigError("n2_loschmidt_zeros needs m > 0");
  std::vector<LoschmidtZero> z;
  for (int n = n_first; n <= n_last; ++n) z.push_back({n, std::sqrt(2.0), n2_zero_time(m, std::sqrt(2.0) * m, n)});
  return z;
}

double n2_order_zero_time(double m, double J, int n) { return n * kPi / std::sqrt(4 * m * m + 2 * J * J); }

std::vector<OrderZero> n2_order_zeros(double m, double J, int n_max) {
  if (!(J > 0)) throw ConfigError("n2_order_zeros needs J > 0");
  const double x = J / m;
  std::vector<OrderZero> out;
  for (int fam : {+1, -1}) {
    const double c = (x * x + fam * 2.0) / (x * std::sqrt(4 + 2 * x * x));
    if (std::abs(c) > 1.0) continue;
    const double k = std::acos(c);
    // A = -B (family +) needs exp(-i(E1-E2)t) = +1, so even n; n = 0 is a genuine zero at t = 0
    for (int n = 0; n <= n_max; ++n) {
      if ((fam > 0) != (n % 2 == 0)) continue;
      out.push_back({k, n2_order_zero_time(m, J, n), n, fam});
    }
  }
  return out;
}

N4Solution n4_solution(double m, double J) {
  if (!(J > 0)) throw ConfigError("n4_solution needs J > 0");
  N4Solution s{};
  s.m = m;
  s.J = J;
  const double y = s.y = m / J;
  s.Q = -4.0 / 3.0 * y * y - 0.5;
  s.R = 0.5 * y;
  s.D = -64.0 / 27.0 * std::pow(y, 6) - 8.0 / 3.0 * std::pow(y, 4) - 0.75 * y * y - 0.125;
  s.S = std::pow(cplx(s.R, 0.0) + std::sqrt(cplx(s.D, 0.0)), 1.0 / 3.0);
  const double re = s.S.real(), im = s.S.imag(), r3 = std::sqrt(3.0);
  s.p = {2 * y + 2 * re, 2 * y - re - r3 * im, 2 * y - re + r3 * im};
  for (int i = 0; i < 3; ++i) {
    const double p = s.p[i];
    s.a[i] = 1.0 / std::sqrt(4 * std::pow(p, 4) - 16 * y * std::pow(p, 3) + 16 * y * y * p * p + 8 * y * p + 3);
    s.b[i] = p * s.a[i];
    s.c[i] = (2 * p * p - 4 * y * p - 1) * s.a[i];
    s.energy[i] = J * (p - 2 * y);
  }
  const double r = std::sqrt(y * y + 0.5);
  s.pp = {y + r, y - r};
  for (int j = 0; j < 2; ++j) {
    s.ap[j] = 1.0 / std::sqrt(4 * s.pp[j] * s.pp[j] + 2);
    s.bp[j] = s.pp[j] * s.ap[j];
    s.energy_p[j] = J * (s.pp[j] - 2 * y);
  }
  return s;
}

Mat N4Solution::eigenvectors() const {
  Mat V = Mat::Zero(7, 7);
  for (int i = 0; i < 3; ++i) V.col(i) << a[i], b[i], b[i], c[i], b[i], b[i], a[i];
  V.col(3) << 0, 0.5, -0.5, 0, 0.5, -0.5, 0;
  V.col(4) << 0, 0.5, -0.5, 0, -0.5, 0.5, 0;
  for (int j = 0; j < 2; ++j) V.col(5 + j) << ap[j], bp[j], bp[j], 0, -bp[j], -bp[j], -ap[j];
  return V;
}

Vec N4Solution::energies() const {
  Vec e(7);
  e << energy[0], energy[1], energy[2], 0.0, 0.0, energy_p[0], energy_p[1];
  return e;
}

std::array<int, 7> n4_label_map(const GaugeBasis& basis) {
  if (basis.n_sites() != 4) throw ConfigError("n4_label_map needs N = 4");
  // vacua have every matter spin at its staggered rest value
  auto charge = [&](int i) {
    int q = 0;
    for (int n = 0; n < 4; ++n) q += basis.matter_z(i, n) != stagger(n);
    return q;
  };
  std::array<int, 7> L{};
  std::vector<int> vac, one;
  for (int i = 0; i < basis.dim(); ++i) {
    const int q = charge(i);
    if (q == 0) vac.push_back(i);
    if (q == 4) L[3] = i;
    if (q == 2) one.push_back(i);
  }
  const auto P = symmetry_permutation(Symmetry::Parity, basis);
  L[0] = vac.at(0);
  L[6] = P[L[0]];
  // labels 2,3 hop from label 1; 5,6 are their parity images
  int k = 1;
  for (int i : one) {
    const uint32_t diff = basis.code(i) ^ basis.code(L[0]);
    if (std::popcount(diff) == 1 && k <= 2) L[k++] = i;
  }
  L[4] = P[L[1]];
  L[5] = P[L[2]];
  return L;
}

}  // namespace qlm
