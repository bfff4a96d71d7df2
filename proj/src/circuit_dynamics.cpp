#include "qlm/circuit_dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlm/vortex.hpp"

namespace qlm {

namespace {

using HermSolver = Eigen::SelfAdjointEigenSolver<CMat>;

HermSolver hermitian_eig(const CMat& H) {
  HermSolver es(H);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
  return es;
}

CMat expi(const HermSolver& es, double t) {
  const CVec ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

struct Sin2Fit {
  double A, W, rms;
};

// Levenberg-Marquardt on f(t) = A sin^2(W t)
Sin2Fit fit_sin2(const std::vector<double>& t, const std::vector<double>& f, double A, double W) {
  const int n = static_cast<int>(t.size());
  auto cost = [&](double a, double w) {
    double s = 0;
    for (int i = 0; i < n; ++i) {
      const double r = f[i] - a * std::pow(std::sin(w * t[i]), 2);
      s += r * r;
    }
    return s;
  };
  double c = cost(A, W), lam = 1e-3;
  for (int it = 0; it < 200; ++it) {
    Eigen::Matrix2d JtJ = Eigen::Matrix2d::Zero();
    Eigen::Vector2d Jtr = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; ++i) {
      const double s = std::sin(W * t[i]);
      const Eigen::Vector2d g(s * s, A * t[i] * std::sin(2 * W * t[i]));
      JtJ += g * g.transpose();
      Jtr += g * (f[i] - A * s * s);
    }
    bool moved = false;
    for (int k = 0; k < 20; ++k) {
      Eigen::Matrix2d M = JtJ;
      M.diagonal() *= 1 + lam;
      const Eigen::Vector2d d = M.ldlt().solve(Jtr);
      const double cn = cost(A + d[0], W + d[1]);
      if (cn <= c) {
        const double rel = std::abs(d[0]) / (std::abs(A) + 1e-300) + std::abs(d[1]) / std::abs(W);
        A += d[0];
        W += d[1];
        c = cn;
        lam = std::max(lam / 10, 1e-15);
        moved = rel > 1e-15;
        break;
      }
      lam *= 10;
    }
    if (!moved) break;
  }
  return {A, std::abs(W), std::sqrt(c / n)};
}

}  // namespace

EffectiveParams fit_rabi(const CMat& H, int from, int to, double sign_hint, const RabiFitOptions& opt) {
  if (from == to || from < 0 || to < 0 || from >= H.rows() || to >= H.rows())
    throw ConfigError("fit_rabi: bad state indices");
  if (opt.samples < 50) throw ConfigError("fit_rabi: too few samples");
  const HermSolver es = hermitian_eig(H);
  const Vec& E = es.eigenvalues();
  const CMat& V = es.eigenvectors();
  const CVec c = V.row(to).adjoint().cwiseProduct(V.row(from).transpose());
  // uniform grid on [0, T]: phases advance by a fixed factor per sample
  auto trace = [&](double T, int n) {
    CVec z = c, step(E.size());
    for (int k = 0; k < E.size(); ++k) step[k] = std::exp(-kI * (E[k] - E[0]) * (T / (n - 1)));
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
      f[i] = std::norm(z.sum());
      z = z.cwiseProduct(step);
    }
    return f;
  };

  // the two eigenstates carrying most of the pair set the coarse scale
  Vec w = V.row(from).cwiseAbs2().transpose() + V.row(to).cwiseAbs2().transpose();
  int a = 0, b = 1;
  for (int k = 0; k < w.size(); ++k) {
    if (w[k] > w[a]) { b = a; a = k; } else if (k != a && (w[k] > w[b] || b == a)) b = k;
  }
  const double Wg = std::abs(E[a] - E[b]) / 2;
  if (!(Wg > 0)) throw NumericalError("fit_rabi: degenerate pair");
  // dressed ordering: which of the pair sits mostly on |from>
  const double lean = (E[a] - E[b]) * (std::norm(V(from, a)) - std::norm(V(to, a)));
  const double sign = std::abs(lean) > 1e-12 * Wg ? lean : sign_hint;

  // first maximum of the transfer trace
  const int nc = 4000;
  const double Tc = 2 * kPi / Wg;
  const std::vector<double> fc = trace(Tc, nc + 1);
  const double fmax = *std::max_element(fc.begin(), fc.end());
  int im = -1;
  for (int i = 1; i < nc; ++i)
    if (fc[i] >= fc[i - 1] && fc[i] >= fc[i + 1] && fc[i] >= 0.5 * fmax) { im = i; break; }
  if (im < 0) throw NumericalError("fit_rabi: no transfer maximum found");
  const double den = fc[im - 1] - 2 * fc[im] + fc[im + 1];
  const double off = den != 0 ? 0.5 * (fc[im - 1] - fc[im + 1]) / den : 0.0;
  const double tmax = Tc * (im + off) / nc;
  const double Wc = kPi / (2 * tmax);

  const double T = 4 * kPi / Wc;
  std::vector<double> t(opt.samples);
  for (int i = 0; i < opt.samples; ++i) t[i] = T * i / (opt.samples - 1);
  const std::vector<double> f = trace(T, opt.samples);
  const Sin2Fit fit = fit_sin2(t, f, fmax, Wc);
  if (!(fit.rms <= opt.max_residual) || !(fit.A > 0) || fit.A > 1 + 1e-9) {
    std::ostringstream os;
    os << "sine fit failed: rms " << fit.rms << ", A " << fit.A;
    throw FitError(os.str(), t, f);
  }
  const double A = std::min(fit.A, 1.0);
  EffectiveParams e;
  e.amplitude = fit.A;
  e.omega = fit.W;
  e.j_eff = fit.W * std::sqrt(A);
  e.delta_eff = (sign < 0 ? -2 : 2) * fit.W * std::sqrt(1 - A);
  e.fit_residual = fit.rms;
  return e;
}

std::vector<int> spin_fock_indices(int n) {
  std::vector<int> idx(8);
  for (int s = 0; s < 8; ++s) idx[s] = fock_index((s >> 2) & 1, (s >> 1) & 1, s & 1, n);
  return idx;
}

EffectiveParams extract_effective_params(const CircuitParams& p, int n, const RabiFitOptions& opt) {
  const CMat H = build_multilevel_hamiltonian(p, n);
  const double bare = omega_prs(spin_params(p), +1, +1, -1);
  return fit_rabi(H, fock_index(1, 1, 0, n), fock_index(0, 0, 1, n), bare, opt);
}

CMat H0Eff::padded(int n) const {
  const auto idx = spin_fock_indices(n);
  CMat D = CMat::Zero(n * n * n, n * n * n);
  for (int s = 0; s < 8; ++s) D(idx[s], idx[s]) = energies[s];
  return D;
}

H0Eff phase_slope_energies(const CMat& H, const Vec& bare, int n, double window, int samples) {
  if (H.rows() != n * n * n || bare.size() != 8) throw ConfigError("phase_slope_energies: size mismatch");
  if (!(window > 0) || samples < 3) throw ConfigError("phase_slope_energies: bad window");
  const HermSolver es = hermitian_eig(H);
  const Vec& E = es.eigenvalues();
  const CMat& V = es.eigenvectors();
  const auto idx = spin_fock_indices(n);
  H0Eff out;
  out.energies.resize(8);
  out.r2.resize(8);
  out.min_survival.resize(8);
  for (int s = 0; s < 8; ++s) {
    const Vec w = V.row(idx[s]).cwiseAbs2().transpose();
    std::vector<double> t(samples), ph(samples);
    double prev = 0, surv = 1;
    for (int i = 0; i < samples; ++i) {
      t[i] = window * i / (samples - 1);
      cplx z = 0;
      for (int k = 0; k < E.size(); ++k) z += w[k] * std::exp(-kI * (E[k] - bare[s]) * t[i]);
      surv = std::min(surv, std::norm(z));
      const double raw = std::arg(z);
      ph[i] = i == 0 ? raw : prev + wrap_angle(raw - prev);
      prev = ph[i];
    }
    // least squares slope and R^2
    const double n_ = samples;
    double st = 0, sp = 0, stt = 0, stp = 0, spp = 0;
    for (int i = 0; i < samples; ++i) {
      st += t[i]; sp += ph[i]; stt += t[i] * t[i]; stp += t[i] * ph[i]; spp += ph[i] * ph[i];
    }
    const double sxx = stt - st * st / n_, sxy = stp - st * sp / n_, syy = spp - sp * sp / n_;
    const double slope = sxy / sxx;
    out.energies[s] = bare[s] - slope;
    out.r2[s] = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    out.min_survival[s] = surv;
    if (surv < 0.99) {
      std::ostringstream os;
      os << "spin state " << s << " survival drops to " << surv << " in the window";
      out.warnings.push_back(os.str());
    }
  }
  return out;
}

H0Eff extract_h0_eff(const CircuitParams& p, int n, double window, int samples) {
  CircuitParams q = p;
  q.Es = 0;
  const CMat H2 = build_multilevel_hamiltonian(q, 2);
  const Vec bare = H2.diagonal().real();
  return phase_slope_energies(build_multilevel_hamiltonian(q, n), bare, n, window, samples);
}

CMat rotating_evolution(const CMat& Hc, const CMat& Href, double t) {
  if (Hc.rows() != Href.rows() || Hc.cols() != Href.cols() || Hc.rows() != Hc.cols())
    throw ConfigError("rotating_evolution: dimension mismatch");
  return expi(hermitian_eig(Href), -t) * expi(hermitian_eig(Hc), t);
}

CMat target_hamiltonian(double mass, double j, int sign) {
  CMat H = CMat::Zero(8, 8);
  for (int s = 0; s < 8; ++s) {
    const double z0 = (s >> 2) & 1 ? -1 : 1, z1 = s & 1 ? -1 : 1;
    H(s, s) = -mass / 2 * z0 + mass / 2 * z1;
  }
  H(6, 1) = H(1, 6) = (sign < 0 ? -1.0 : 1.0) * j;
  return H;
}

double process_fidelity(const CMat& U, const CMat& M) {
  const double d = static_cast<double>(U.rows());
  const double tr2 = std::norm((U.adjoint() * M).trace());
  const double mm = (M.adjoint() * M).trace().real();
  return (tr2 + mm) / (d * (d + 1));
}

double process_fidelity_pauli(const CMat& U, const CMat& M) {
  if (U.rows() != 8 || M.rows() != 8) throw ConfigError("process_fidelity_pauli: three spins only");
  CMat P[4] = {CMat::Identity(2, 2), CMat::Zero(2, 2), CMat::Zero(2, 2), CMat::Zero(2, 2)};
  P[1] << 0, 1, 1, 0;
  P[2] << 0, -kI, kI, 0;
  P[3] << 1, 0, 0, -1;
  const double d = 8;
  double sum = 0;
  for (int j = 0; j < 64; ++j) {
    CMat Uj(8, 8);
    const CMat& A = P[j >> 4];
    const CMat& B = P[(j >> 2) & 3];
    const CMat& C = P[j & 3];
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) Uj(r, c) = A(r >> 2, c >> 2) * B((r >> 1) & 1, (c >> 1) & 1) * C(r & 1, c & 1);
    const CMat EUj = M * Uj * M.adjoint();
    sum += (U * Uj.adjoint() * U.adjoint() * EUj).trace().real();
  }
  // sum = d |tr U^dag M|^2; tr(M^dag M) stands in for d when M leaks
  const double mm = (M.adjoint() * M).trace().real();
  return (sum / d + mm) / (d * (d + 1));
}

FidelityTrace average_fidelity(const CMat& Hc, int n, const Vec& h0eff, const CMat& Ht, double mass,
                               const std::vector<double>& times) {
  if (Hc.rows() != n * n * n || h0eff.size() != 8 || Ht.rows() != 8) throw ConfigError("average_fidelity: size mismatch");
  const HermSolver es = hermitian_eig(Hc), et = hermitian_eig(Ht);
  const auto idx = spin_fock_indices(n);
  Vec hm(8);
  for (int s = 0; s < 8; ++s) {
    const double z0 = (s >> 2) & 1 ? -1 : 1, z1 = s & 1 ? -1 : 1;
    hm[s] = h0eff[s] + mass / 2 * (z0 - z1);
  }
  // rows of V restricted to the spin subspace
  CMat Vs(8, es.eigenvectors().cols());
  for (int s = 0; s < 8; ++s) Vs.row(s) = es.eigenvectors().row(idx[s]);
  const CVec Ec = es.eigenvalues().cast<cplx>();
  FidelityTrace out;
  out.times = times;
  for (double t : times) {
    const CVec ph = (-kI * t * Ec).array().exp();
    CMat M = Vs * ph.asDiagonal() * Vs.adjoint();
    for (int s = 0; s < 8; ++s) M.row(s) *= std::exp(kI * hm[s] * t);
    const CMat U = expi(et, t);
    const double F = process_fidelity(U, M);
    const double L = 1 - (M.adjoint() * M).trace().real() / 8;
    out.avg_fidelity.push_back(F);
    out.leakage.push_back(L);
    out.avg_fidelity_no_leakage.push_back(F + L);
  }
  return out;
}

FidelityTrace average_fidelity(const CircuitParams& p, const EffectiveParams& eff, const H0Eff& h0,
                               const std::vector<double>& times, int n) {
  const double mass = eff.delta_eff / 2;
  const int sign = spin_params(p).Jx_0g1 < 0 ? -1 : 1;
  return average_fidelity(build_multilevel_hamiltonian(p, n), n, h0.energies, target_hamiltonian(mass, eff.j_eff, sign),
                          mass, times);
}

}  // namespace qlm
