#include <doctest.h>

#include <cmath>

#include "qlm/oracles.hpp"
#include "qlm/string_order.hpp"

using namespace qlm;

TEST_CASE("N=2 string operator") {
  const GaugeBasis b(2);
  const double k = 0.7;
  const CMat g = CMat(build_string_operator(k, b));
  // 1 + e^{-ik}|2><1| + (e^{ik}|1> + e^{-ik}|3>)<2| + e^{ik}|2><3|
  CMat ref = CMat::Identity(3, 3);
  ref(1, 0) = std::exp(-kI * k);
  ref(0, 1) = std::exp(kI * k);
  ref(2, 1) = std::exp(-kI * k);
  ref(1, 2) = std::exp(kI * k);
  CHECK((g - ref).norm() < 1e-15);
  const CMat g0 = CMat(build_string_operator(0.0, b));
  CHECK((g0 - g0.real().cast<cplx>()).norm() == 0.0);
  CHECK(g0.real().sum() == doctest::Approx(7.0));
}

TEST_CASE("string operator stays in the gauge sector") {
  for (int N : {4, 6, 8}) {
    const GaugeBasis b(N);
    for (double k : {0.0, 0.4, 2.1}) {
      const CSpMat g = build_string_operator(k, b);
      CHECK(g.rows() == b.dim());
      CHECK(g.nonZeros() > 0);
    }
  }
}

TEST_CASE("g(k,t) is even in k") {
  const std::vector<double> k{-1.1, -0.3, 0.3, 1.1}, tm{0.0, 0.7, 2.3};
  for (int N : {2, 4, 6}) {
    const ScanGrid g = order_param_scan({N, 1.0, 1.5}, k, tm, 1);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(g.samples(0, j) - g.samples(3, j)) < 1e-12);
      CHECK(std::abs(g.samples(1, j) - g.samples(2, j)) < 1e-12);
    }
  }
}

TEST_CASE("N=2 order parameter zeros") {
  for (double x : {1.6, 2.0, 3.0}) {
    const auto zeros = n2_order_zeros(1.0, x, 5);
    CHECK(!zeros.empty());
    for (const auto& z : zeros) {
      const ScanGrid g = order_param_scan({2, 1.0, x}, {z.k}, {z.t}, 1);
      CHECK(std::abs(g.samples(0, 0)) < 1e-10);
    }
  }
}

TEST_CASE("default k grid") {
  const auto k = default_k_grid(64);
  CHECK(k.size() == 64);
  CHECK(k.front() == 0.0);
  CHECK(k.back() == doctest::Approx(kPi));
}
