#include <doctest.h>

#include <cmath>
#include <random>

#include "qlm/circuit.hpp"

using namespace qlm;

namespace {

CircuitParams sample_circuit() {
  CircuitParams p;
  p.C = 12e-15;
  p.C0 = 40e-15;
  p.C1 = 35e-15;
  p.E0 = 900 * kTwoPiGHz / 100;
  p.E1 = 1400 * kTwoPiGHz / 100;
  p.Ec = 4 * kTwoPiGHz;
  p.Es = 0.5 * kTwoPiGHz;
  return p;
}

}  // namespace

TEST_CASE("mode scales") {
  CircuitParams p;
  p.Ec = 10 * kTwoPiGHz;
  p.E0 = p.E1 = 20 * kTwoPiGHz;
  const ModeScales m = mode_scales(p);
  CHECK(m.r0 == doctest::Approx(m.r1).epsilon(1e-15));
  // independent hand evaluation of (4 (4C + K) Ec)^{-1/4} with C = 50 fF, K = 1 fF
  CHECK(m.rg == doctest::Approx(0.3725994205975457).epsilon(1e-12));
  CircuitParams q = p;
  q.K = 1e-22;
  const ModeScales mk = mode_scales(q);
  CHECK(mk.king == doctest::Approx(1 / (4 * p.C * kCapToNs)).epsilon(1e-6));
  CircuitParams bad = p;
  bad.Ec = 0;
  CHECK_THROWS_AS(mode_scales(bad), ConfigError);
  bad = p;
  bad.C0 = -1e-15;
  CHECK_THROWS_AS(mode_scales(bad), ConfigError);
}

TEST_CASE("displacement blocks") {
  // n = 2 closed form
  const double k = 0.45;
  const CMat D = displacement_block(k, 2);
  const double e = std::exp(-k * k / 2);
  CHECK(std::abs(D(0, 0) - e) < 1e-15);
  CHECK(std::abs(D(1, 0) - kI * k * e) < 1e-15);
  CHECK(std::abs(D(0, 1) - kI * k * e) < 1e-15);
  CHECK(std::abs(D(1, 1) - (1 - k * k) * e) < 1e-15);
  CHECK((displacement_block(0.0, 5) - CMat::Identity(5, 5)).norm() < 1e-15);
  for (double kk : {0.05, 0.2, 0.45, 0.7})
    CHECK((displacement_block(kk, 4) - displacement_block_bruteforce(kk, 4, 60)).norm() < 1e-8);
  // truncation: rows of the n=8 block miss little weight at small k
  const CMat D8 = displacement_block(0.3, 8);
  for (int r = 0; r < 4; ++r) CHECK(1 - D8.row(r).squaredNorm() < 1e-3);
  CHECK_THROWS_AS(displacement_block(0.1, 1), ConfigError);
  CHECK_THROWS_AS(displacement_block(6.0, 4), ConfigError);
}

TEST_CASE("two-level truncation equals the spin model") {
  for (int trial = 0; trial < 3; ++trial) {
    CircuitParams p = sample_circuit();
    p.Es *= 1 + trial;
    p.EL = 0.01 * trial * kTwoPiGHz;
    const CMat H2 = build_multilevel_hamiltonian(p, 2);
    const CMat Hs = spin_hamiltonian(spin_params(p));
    const cplx shift = (H2 - Hs).trace() / 8.0;
    CHECK((H2 - Hs - shift * CMat::Identity(8, 8)).norm() < 1e-12 * Hs.norm());
  }
}

TEST_CASE("circuit Hamiltonian structure") {
  const CircuitParams p = sample_circuit();
  for (int n : {2, 3, 4}) {
    const CMat H = build_multilevel_hamiltonian(p, n);
    CHECK(H.rows() == n * n * n);
    CHECK((H - H.adjoint()).norm() == 0.0);
  }
  CHECK_THROWS_AS(build_multilevel_hamiltonian(p, 1), ConfigError);
  CHECK_THROWS_AS(build_multilevel_hamiltonian(p, 9), ConfigError);

  // Es = 0: no XXX term; the Es term couples states of opposite total parity only
  CircuitParams q = p;
  q.Es = 0;
  CHECK(spin_params(q).Jx_0g1 == 0.0);
  const int n = 3;
  const CMat Hes = build_multilevel_hamiltonian(p, n) - build_multilevel_hamiltonian(q, n);
  for (int i = 0; i < n * n * n; ++i)
    for (int j = 0; j < n * n * n; ++j) {
      const int pi = i / (n * n) + (i / n) % n + i % n, pj = j / (n * n) + (j / n) % n + j % n;
      if ((pi + pj) % 2 == 0) CHECK(std::abs(Hes(i, j)) < 1e-12);
    }
  for (int mode = 0; mode < 3; ++mode) {
    // parity of each mode separately flips under the Es term
    int i = fock_index(0, 0, 0, n), j = fock_index(mode == 0, mode == 1, mode == 2, n);
    CHECK(std::abs(Hes(i, j)) < 1e-12);
  }
}

TEST_CASE("Ec -> 0 removes the gauge-mode anharmonicity") {
  CircuitParams p = sample_circuit();
  const double a1 = std::abs(spin_params(p).alphag);
  p.Ec *= 1e-4;
  CHECK(std::abs(spin_params(p).alphag) < 1e-3 * a1);
}

TEST_CASE("anharmonicity matches the three-level diagonal") {
  CircuitParams p = sample_circuit();
  p.Es = 0;
  const SpinModelParams s = spin_params(p);
  const CMat H = build_multilevel_hamiltonian(p, 3);
  // second difference along one mode, averaged over the other two modes' spin states
  auto e = [&](int a, int b, int c) { return H(fock_index(a, b, c, 3), fock_index(a, b, c, 3)).real(); };
  auto alpha = [&](int mode) {
    double acc = 0;
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v) {
        auto at = [&](int k) {
          if (mode == 0) return e(k, u, v);
          if (mode == 1) return e(u, k, v);
          return e(u, v, k);
        };
        acc += at(2) - 2 * at(1) + at(0);
      }
    return acc / 4;
  };
  CHECK(alpha(0) == doctest::Approx(s.alpha0).epsilon(1e-10));
  CHECK(alpha(1) == doctest::Approx(s.alphag).epsilon(1e-10));
  CHECK(alpha(2) == doctest::Approx(s.alpha1).epsilon(1e-10));
}

TEST_CASE("omega_prs is a spin-model energy difference") {
  const SpinModelParams s = spin_params(sample_circuit());
  const CMat H = spin_hamiltonian(s);
  // |110> -> |001>: sigma^+_0 sigma^+_g sigma^-_1 in the sigma^z = +1 -> index 0 convention
  const double d = H(6, 6).real() - H(1, 1).real();
  CHECK(omega_prs(s, 1, 1, -1) == doctest::Approx(d).epsilon(1e-13));
  for (int st = 0; st < 8; ++st) {
    const int z0 = st & 4 ? -1 : 1, zg = st & 2 ? -1 : 1, z1 = st & 1 ? -1 : 1;
    const double ref = -0.5 * (s.Omega0 * z0 + s.Omegag * zg + s.Omega1 * z1) + s.Jz_0g * z0 * zg +
                       s.Jz_01 * z0 * z1 + s.Jz_g1 * zg * z1 + s.Jz_0g1 * z0 * zg * z1;
    CHECK(H(st, st).real() == doctest::Approx(ref).epsilon(1e-14));
  }
  CHECK(std::abs(H(6, 1).real() - s.Jx_0g1) < 1e-15);
  const double m = 0.01;
  CHECK(omega_prs(s, 1, 1, -1, m) == doctest::Approx(d - 2 * m).epsilon(1e-13));
}

TEST_CASE("json round trip") {
  CircuitParams p = sample_circuit();
  p.EL1 = 0.3;
  const CircuitParams q = circuit_from_json(to_json(p));
  CHECK(q.C == p.C);
  CHECK(q.E0 == doctest::Approx(p.E0).epsilon(1e-15));
  CHECK(q.EL1 == doctest::Approx(p.EL1).epsilon(1e-15));
  CHECK(to_json(p)["Es"].get<double>() == doctest::Approx(0.5));
  auto j = to_json(p);
  j.erase("EL");
  CHECK_NOTHROW(circuit_from_json(j));
  j.erase("Ec");
  CHECK_THROWS_AS(circuit_from_json(j), ConfigError);
  const SpinModelParams s = spin_params(p), t = spin_from_json(to_json(s));
  CHECK(t.Jx_0g1 == doctest::Approx(s.Jx_0g1).epsilon(1e-15));
  CHECK(t.alpha1 == doctest::Approx(s.alpha1).epsilon(1e-15));
}
