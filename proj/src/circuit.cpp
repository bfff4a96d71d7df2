#include "qlm/circuit.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qlm {

void CircuitParams::validate() const {
  for (double c : {C, C0, C1, K})
    if (!(c > 0) || !std::isfinite(c)) throw ConfigError("capacitances must be positive");
  if (!(Ec > 0)) throw ConfigError("Ec must be positive");
  if (Es < 0 || E0 < 0 || E1 < 0) throw ConfigError("Josephson energies must be nonnegative");
  if (EL < 0 || EL0 < 0 || EL1 < 0) throw ConfigError("inductive energies must be nonnegative");
}

ModeScales mode_scales(const CircuitParams& p) {
  p.validate();
  const double C = p.C * kCapToNs, C0 = p.C0 * kCapToNs, C1 = p.C1 * kCapToNs, K = p.K * kCapToNs;
  const double q0 = 8 * (2 * C + 2 * C0 + K) * (2 * p.EL0 + 2 * p.EL + p.E0 + p.Ec);
  const double qg = 4 * (4 * C + K) * (2 * p.EL + p.Ec);
  const double q1 = 8 * (2 * C + 2 * C1 + K) * (2 * p.EL1 + 2 * p.EL + p.E1 + p.Ec);
  if (!(q0 > 0 && qg > 0 && q1 > 0)) throw NumericalError("nonpositive radicand in mode scales");
  return {std::pow(q0, -0.25), std::pow(qg, -0.25), std::pow(q1, -0.25),
          1 / (4 * C + 4 * C0 + 2 * K), 1 / (4 * C + K), 1 / (4 * C + 4 * C1 + 2 * K)};
}

SpinModelParams spin_params(const CircuitParams& p) {
  const ModeScales m = mode_scales(p);
  const double a = m.r0 * m.r0, g = m.rg * m.rg, b = m.r1 * m.r1;
  const double e = std::exp(-(a + g + b) / 4);
  SpinModelParams s;
  s.Omega0 = 2 * (p.E0 + 4 * p.EL0 + 4 * p.EL + p.Ec) * a + 2 * p.E0 * a * std::exp(-a) +
             p.Ec * a / 2 * (2 - g / 2) * (2 - b / 2) * e;
  s.Omegag = 2 * (4 * p.EL + p.Ec) * g + p.Ec * g / 2 * (2 - a / 2) * (2 - b / 2) * e;
  s.Omega1 = 2 * (p.E1 + 4 * p.EL1 + 4 * p.EL + p.Ec) * b + 2 * p.E1 * b * std::exp(-b) +
             p.Ec * b / 2 * (2 - a / 2) * (2 - g / 2) * e;
  s.Jz_0g = -p.Ec * a * g / 8 * (2 - b / 2) * e;
  s.Jz_01 = -p.Ec * a * b / 8 * (2 - g / 2) * e;
  s.Jz_g1 = -p.Ec * g * b / 8 * (2 - a / 2) * e;
  s.Jz_0g1 = -p.Ec * a * g * b / 16 * e;
  s.Jx_0g1 = -std::sqrt(2.0) * p.Es * m.r0 * m.rg * m.r1 * e;
  s.alpha0 = -2 * p.E0 * a * a * std::exp(-a) - p.Ec * a * a / 2 * (1 - g / 4) * (1 - b / 4) * e;
  s.alphag = -p.Ec * g * g / 2 * (1 - a / 4) * (1 - b / 4) * e;
  s.alpha1 = -2 * p.E1 * b * b * std::exp(-b) - p.Ec * b * b / 2 * (1 - a / 4) * (1 - g / 4) * e;
  return s;
}

CMat displacement_block(double k, int n) {
  if (n < 2) throw ConfigError("displacement block needs n_levels >= 2");
  if (!(std::abs(k) < 5)) throw ConfigError("displacement block accuracy guard |k| < 5");
  // <m|D|n> = e^{-k^2/2} sqrt(n!/m!) (ik)^{m-n} L_n^{(m-n)}(k^2), m >= n
  const double x = k * k, pre = std::exp(-x / 2);
  CMat D(n, n);
  for (int mm = 0; mm < n; ++mm) {
    for (int nn = 0; nn <= mm; ++nn) {
      const int d = mm - nn;
      double L0 = 1.0, L1 = 1.0 + d - x, L = nn == 0 ? L0 : L1;
      for (int j = 2; j <= nn; ++j) {
        L = ((2 * j - 1 + d - x) * L1 - (j - 1 + d) * L0) / j;
        L0 = L1;
        L1 = L;
      }
      double ratio = 1.0;  // sqrt(n!/m!)
      for (int j = nn + 1; j <= mm; ++j) ratio /= std::sqrt(double(j));
      const cplx v = pre * ratio * std::pow(kI * k, d) * L;
      D(mm, nn) = v;
      D(nn, mm) = v;
    }
  }
  return D;
}

CMat displacement_block_bruteforce(double k, int n, int big) {
  Mat a = Mat::Zero(big, big);
  for (int j = 1; j < big; ++j) a(j - 1, j) = std::sqrt(double(j));
  CMat X = (kI * k) * (a + a.transpose()).cast<cplx>();
  CMat E = X.exp();
  return E.topLeftCorner(n, n);
}

namespace {

CMat kron3(const CMat& A, const CMat& B, const CMat& C) {
  CMat AB = Eigen::kroneckerProduct(A, B);
  return Eigen::kroneckerProduct(AB, C);
}

// per-mode single-body operator: kinetic + inductive + cos(2 psi) junction
CMat single_mode(double r, double kin, double el, double ej, int n) {
  // (a^dag -+ a)^2 built with one spare level so the truncated square is exact
  Mat a = Mat::Zero(n + 1, n + 1);
  for (int j = 1; j <= n; ++j) a(j - 1, j) = std::sqrt(double(j));
  Mat xm = a.transpose() - a, xp = a.transpose() + a;
  Mat q2 = -(xm * xm).topLeftCorner(n, n) / (2 * r * r);  // q = i(a^dag - a)/(sqrt2 r)
  Mat psi2 = (xp * xp).topLeftCorner(n, n) * (r * r / 2);
  CMat D = displacement_block(std::sqrt(2.0) * r, n);
  CMat cos2 = (D + D.conjugate()) / 2.0;
  return (kin / 2 * q2 + el * psi2).cast<cplx>() - ej * cos2;
}

}  // namespace

CMat build_multilevel_hamiltonian(const CircuitParams& p, int n) {
  if (n < 2 || n > 8) throw ConfigError("n_levels must be in [2, 8]");
  const ModeScales m = mode_scales(p);
  const CMat I = CMat::Identity(n, n);
  CMat H = kron3(single_mode(m.r0, m.kin0, 4 * (p.EL0 + p.EL), p.E0, n), I, I);
  H += kron3(I, single_mode(m.rg, m.king, 4 * p.EL, 0.0, n), I);
  H += kron3(I, I, single_mode(m.r1, m.kin1, 4 * (p.EL1 + p.EL), p.E1, n));
  CMat c[3], s[3];
  const double r[3] = {m.r0, m.rg, m.r1};
  for (int j = 0; j < 3; ++j) {
    CMat D = displacement_block(r[j] / std::sqrt(2.0), n);
    // D(-ik) is the entrywise conjugate since a^dag + a is real symmetric
    c[j] = (D + D.conjugate()) / 2.0;
    s[j] = (D - D.conjugate()) / (2.0 * kI);
  }
  H -= 4 * p.Ec * kron3(c[0], c[1], c[2]);
  H -= 4 * p.Es * kron3(s[0], s[1], s[2]);
  return (H + H.adjoint()) / 2.0;
}

CMat spin_hamiltonian(const SpinModelParams& s) {
  CMat sz(2, 2), sx(2, 2), I = CMat::Identity(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  CMat H = -0.5 * s.Omega0 * kron3(sz, I, I) - 0.5 * s.Omegag * kron3(I, sz, I) - 0.5 * s.Omega1 * kron3(I, I, sz);
  H += s.Jz_0g * kron3(sz, sz, I) + s.Jz_01 * kron3(sz, I, sz) + s.Jz_g1 * kron3(I, sz, sz);
  H += s.Jz_0g1 * kron3(sz, sz, sz) + s.Jx_0g1 * kron3(sx, sx, sx);
  return H;
}

double omega_prs(const SpinModelParams& s, int p, int r, int q, double mass) {
  // detuning of sigma^p_0 sigma^r_g sigma^q_1; the triple Z term enters with
  // the sign that makes omega_{++-} = E(|110>) - E(|001>) on the bare model
  return p * (s.Omega0 - mass) + r * s.Omegag + q * (s.Omega1 + mass) - 2 * p * r * q * s.Jz_0g1;
}

nlohmann::json to_json(const CircuitParams& p) {
  const double G = kTwoPiGHz;
  return {{"units", {{"capacitance", "F"}, {"energy", "GHz (value times 2pi is the angular frequency)"}}},
          {"C", p.C}, {"C0", p.C0}, {"C1", p.C1}, {"K", p.K},
          {"E0", p.E0 / G}, {"E1", p.E1 / G}, {"Ec", p.Ec / G}, {"Es", p.Es / G},
          {"EL", p.EL / G}, {"EL0", p.EL0 / G}, {"EL1", p.EL1 / G}};
}

CircuitParams circuit_from_json(const nlohmann::json& j) {
  const double G = kTwoPiGHz;
  CircuitParams p;
  try {
    p.C = j.at("C");
    p.C0 = j.at("C0");
    p.C1 = j.at("C1");
    p.K = j.at("K");
    p.E0 = j.at("E0").get<double>() * G;
    p.E1 = j.at("E1").get<double>() * G;
    p.Ec = j.at("Ec").get<double>() * G;
    p.Es = j.at("Es").get<double>() * G;
    p.EL = j.value("EL", 0.0) * G;
    p.EL0 = j.value("EL0", 0.0) * G;
    p.EL1 = j.value("EL1", 0.0) * G;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("circuit json: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json to_json(const SpinModelParams& s) {
  const double G = kTwoPiGHz;
  return {{"units", "GHz (value times 2pi is the angular frequency)"},
          {"Omega0", s.Omega0 / G}, {"Omegag", s.Omegag / G}, {"Omega1", s.Omega1 / G},
          {"Jz_0g", s.Jz_0g / G}, {"Jz_01", s.Jz_01 / G}, {"Jz_g1", s.Jz_g1 / G}, {"Jz_0g1", s.Jz_0g1 / G},
          {"Jx_0g1", s.Jx_0g1 / G}, {"alpha0", s.alpha0 / G}, {"alphag", s.alphag / G}, {"alpha1", s.alpha1 / G}};
}

SpinModelParams spin_from_json(const nlohmann::json& j) {
  const double G = kTwoPiGHz;
  SpinModelParams s;
  try {
    s.Omega0 = j.at("Omega0").get<double>() * G;
    s.Omegag = j.at("Omegag").get<double>() * G;
    s.Omega1 = j.at("Omega1").get<double>() * G;
    s.Jz_0g = j.at("Jz_0g").get<double>() * G;
    s.Jz_01 = j.at("Jz_01").get<double>() * G;
    s.Jz_g1 = j.at("Jz_g1").get<double>() * G;
    s.Jz_0g1 = j.at("Jz_0g1").get<double>() * G;
    s.Jx_0g1 = j.at("Jx_0g1").get<double>() * G;
    s.alpha0 = j.at("alpha0").get<double>() * G;
    s.alphag = j.at("alphag").get<double>() * G;
    s.alpha1 = j.at("alpha1").get<double>() * G;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("spin json: ") + e.what());
  }
  return s;
}

}  // namespace qlm
