#include <doctest.h>

#include <cmath>
#include <random>

#include "qlm/circuit_dynamics.hpp"

using namespace qlm;

namespace {

// tuned reference point, see tools/qlm_cli circuit tune
CircuitParams reference_circuit() {
  CircuitParams p;
  p.C = 7.878801805757765e-15;
  p.C0 = 2.8176343292288255e-14;
  p.C1 = 3.2920499086462435e-14;
  p.K = 1e-15;
  p.E0 = 444.0227379363093 * kTwoPiGHz;
  p.E1 = 1017.8679910605144 * kTwoPiGHz;
  p.Ec = 18.84864217675635 * kTwoPiGHz;
  p.Es = 0.5 * kTwoPiGHz;
  return p;
}

CMat random_matrix(int d, std::mt19937& rng) {
  std::normal_distribution<double> n(0, 1);
  CMat M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = {n(rng), n(rng)};
  return M;
}

}  // namespace

TEST_CASE("synthetic two-level fit is exact") {
  for (double sgn : {1.0, -1.0}) {
    const double w = 0.1 * sgn, J = 0.04;
    CMat H(2, 2);
    H << -w / 2, J, J, w / 2;
    const EffectiveParams e = fit_rabi(H, 1, 0, 0.0);
    CHECK(e.delta_eff == doctest::Approx(w).epsilon(1e-10));
    CHECK(e.j_eff == doctest::Approx(J).epsilon(1e-10));
    CHECK(e.fit_residual < 1e-12);
  }
  // resonant: full transfer, delta 0
  CMat H(2, 2);
  H << 0.3, 0.02, 0.02, 0.3;
  const EffectiveParams e = fit_rabi(H, 0, 1, 1.0);
  CHECK(std::abs(e.delta_eff) < 1e-6);
  CHECK(e.j_eff == doctest::Approx(0.02).epsilon(1e-10));
  CHECK_THROWS_AS(fit_rabi(H, 0, 0, 1.0), ConfigError);
}

TEST_CASE("non-sinusoidal transfer raises FitError") {
  CMat H = CMat::Zero(3, 3);
  H(0, 1) = H(1, 0) = 0.05;
  H(0, 2) = H(2, 0) = 0.045;
  H(1, 1) = 0.02;
  H(2, 2) = -0.071;
  bool thrown = false;
  try {
    fit_rabi(H, 0, 1, 1.0);
  } catch (const FitError& e) {
    thrown = true;
    CHECK(e.t.size() == e.f.size());
    CHECK(!e.t.empty());
  }
  CHECK(thrown);
}

TEST_CASE("phase-slope energies of a diagonal model") {
  const int n = 3;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  Vec diag(n * n * n);
  for (int i = 0; i < diag.size(); ++i) diag[i] = u(rng);
  const auto idx = spin_fock_indices(n);
  Vec bare(8);
  for (int s = 0; s < 8; ++s) bare[s] = diag[idx[s]] + 0.01 * (s - 3);
  const H0Eff h = phase_slope_energies(diag.cast<cplx>().asDiagonal(), bare, n, 50.0, 400);
  for (int s = 0; s < 8; ++s) {
    CHECK(h.energies[s] == doctest::Approx(diag[idx[s]]).epsilon(1e-10));
    CHECK(h.r2[s] > 1 - 1e-12);
    CHECK(h.min_survival[s] == doctest::Approx(1.0));
  }
  CHECK(h.warnings.empty());
  const CMat P = h.padded(n);
  for (int s = 0; s < 8; ++s) CHECK(P(idx[s], idx[s]).real() == h.energies[s]);
  CHECK(P.cwiseAbs().sum() == doctest::Approx(h.energies.cwiseAbs().sum()));
  CHECK_THROWS_AS(phase_slope_energies(CMat::Identity(8, 8), bare, n), ConfigError);
}

TEST_CASE("rotating evolution identities") {
  std::mt19937 rng(9);
  CMat A = random_matrix(6, rng), B = random_matrix(6, rng);
  A = (A + A.adjoint()).eval();
  B = (B + B.adjoint()).eval();
  CHECK((rotating_evolution(A, A, 0.83) - CMat::Identity(6, 6)).norm() < 1e-12);
  CHECK((rotating_evolution(A, B, 0.0) - CMat::Identity(6, 6)).norm() < 1e-12);
  const CMat R = rotating_evolution(A, B, 1.7);
  CHECK((R.adjoint() * R - CMat::Identity(6, 6)).norm() < 1e-12);
  CHECK_THROWS_AS(rotating_evolution(A, CMat::Identity(5, 5), 1.0), ConfigError);
}

TEST_CASE("process fidelity: Pauli sum matches the closed form") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const CMat U = Eigen::HouseholderQR<CMat>(random_matrix(8, rng)).householderQ();
    const CMat M = 0.3 * random_matrix(8, rng);
    CHECK(process_fidelity(U, M) == doctest::Approx(process_fidelity_pauli(U, M)).epsilon(1e-12));
    const CMat V = Eigen::HouseholderQR<CMat>(random_matrix(8, rng)).householderQ();
    const double F = process_fidelity(U, V);
    CHECK(F <= 1 + 1e-12);
    CHECK(F >= 1.0 / 9.0 - 1e-12);
    CHECK(process_fidelity(U, U) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("ideal synthetic circuit has unit fidelity") {
  const double m = -0.04, j = 0.02;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  Vec h0(8);
  for (int s = 0; s < 8; ++s) h0[s] = u(rng);
  // resonance in the rotating frame: the pair detuning equals 2m
  h0[6] = h0[1] + 2 * m;
  for (int sign : {1, -1}) {
    CMat Hc = h0.cast<cplx>().asDiagonal();
    Hc(6, 1) = Hc(1, 6) = sign * j;
    const FidelityTrace f = average_fidelity(Hc, 2, h0, target_hamiltonian(m, j, sign), m, {0.0, 3.0, 40.0, 97.0});
    for (size_t i = 0; i < f.times.size(); ++i) {
      CHECK(f.avg_fidelity[i] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(f.leakage[i]) < 1e-12);
    }
  }
}

TEST_CASE("target Hamiltonian") {
  const CMat H = target_hamiltonian(0.2, 0.05, -1);
  CHECK(H(6, 1).real() == doctest::Approx(-0.05));
  CHECK(H(1, 6).real() == doctest::Approx(-0.05));
  CHECK(H(0, 0).real() == doctest::Approx(0.0));
  CHECK(H(4, 4).real() == doctest::Approx(0.2));   // z0 = -1, z1 = +1
  CHECK(H(1, 1).real() == doctest::Approx(-0.2));  // z0 = +1, z1 = -1
  CHECK((H - H.adjoint()).norm() == 0.0);
}

TEST_CASE("reference circuit") {
  const CircuitParams p = reference_circuit();
  const EffectiveParams e = extract_effective_params(p);
  CHECK(e.delta_eff / kTwoPiMHz == doctest::Approx(-12.861).epsilon(1e-3));
  CHECK(e.j_eff / kTwoPiMHz == doctest::Approx(6.4305).epsilon(1e-3));
  CHECK(4 * e.j_eff / e.delta_eff == doctest::Approx(-2.0).epsilon(0.025));
  CHECK(e.fit_residual < 1e-4);

  const H0Eff h = extract_h0_eff(p);
  for (int s = 0; s < 8; ++s) CHECK(h.r2[s] > 1 - 1e-6);
  CircuitParams q = p;
  q.Es = 0;
  Eigen::SelfAdjointEigenSolver<CMat> es(build_multilevel_hamiltonian(q, 4));
  CHECK(h.energies[0] == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-6));

  const FidelityTrace f = average_fidelity(p, e, h, {0.0, 10.0});
  CHECK(f.avg_fidelity[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.leakage[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.avg_fidelity[1] > 0.99);
}
