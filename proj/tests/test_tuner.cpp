#include <doctest.h>

#include <cmath>

#include "qlm/tuner.hpp"

using namespace qlm;

TEST_CASE("bare seeds") {
  const TuneSpec spec;
  const CircuitParams s0 = bare_seed(spec, 0), s1 = bare_seed(spec, 1), s2 = bare_seed(spec, 2);
  for (const CircuitParams& s : {s0, s1, s2}) {
    const SpinModelParams sp = spin_params(s);
    CHECK(std::abs(omega_prs(sp, 1, 1, -1) - spec.delta_target()) < 50 * kTwoPiMHz);
    CHECK(std::abs(std::abs(sp.Jx_0g1) - std::abs(spec.j_target())) < 50 * kTwoPiMHz);
    const FreeVec x = free_from_params(s);
    for (int i = 0; i < 6; ++i) {
      CHECK(x[i] >= spec.bounds[i].lo);
      CHECK(x[i] <= spec.bounds[i].hi);
    }
    CHECK(s.K == spec.K);
    CHECK(s.Es == spec.Es);
  }
  CHECK(s1.C != s2.C);
  CHECK(bare_seed(spec, 1).C == s1.C);
}

TEST_CASE("free vector round trip") {
  const TuneSpec spec;
  const FreeVec x = spec.nominal;
  const FreeVec y = free_from_params(params_from_free(spec, x));
  for (int i = 0; i < 6; ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("Nelder-Mead on Rosenbrock") {
  int calls = 0;
  auto rosen = [&](const std::vector<double>& v) {
    ++calls;
    return 100 * std::pow(v[1] - v[0] * v[0], 2) + std::pow(1 - v[0], 2);
  };
  const SimplexResult r = nelder_mead(rosen, {-1.2, 1.0}, 0.5, 2000, 1e-14);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.evals <= 2000);
  CHECK(r.evals == calls);
  CHECK(r.trace.size() == static_cast<size_t>(r.evals));
  for (size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
  const SimplexResult s = nelder_mead(rosen, {-1.2, 1.0}, 0.5, 30);
  CHECK(s.evals <= 30);
}

TEST_CASE("spec validation") {
  TuneSpec s;
  CHECK_NOTHROW(s.validate());
  s.target_ratio = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = TuneSpec{};
  s.nominal[0] = 1e-12;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = TuneSpec{};
  s.n_levels = 2;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = TuneSpec{};
  s.starts = 0;
  CHECK_THROWS_AS(tune(s), ConfigError);
  CHECK(TuneSpec{}.j_target() == doctest::Approx(2.0 / 49.5));
  CHECK(4 * TuneSpec{}.j_target() / TuneSpec{}.delta_target() == doctest::Approx(-2.0));
}

TEST_CASE("small tuning run is deterministic and keeps the best start") {
  TuneSpec s;
  s.starts = 2;
  s.budget = 25;
  s.polish_rounds = 0;
  s.threads = 2;
  const TuneResult a = tune(s);
  s.threads = 1;
  const TuneResult b = tune(s);
  CHECK(a.objective == b.objective);
  CHECK(a.params.E0 == b.params.E0);
  REQUIRE(a.starts.size() == 2);
  for (const auto& st : a.starts) CHECK(a.objective <= st.objective);
  const Objective o = tune_objective(s, a.params);
  CHECK(o.value == doctest::Approx(a.objective).epsilon(1e-12));
  const auto j = a.report(s);
  CHECK(j.contains("verification"));
}

TEST_CASE("objective penalises constraint violations") {
  TuneSpec s;
  CircuitParams p = bare_seed(s, 0);
  const Objective ok = tune_objective(s, p);
  s.alpha_min = 1e6;
  const Objective bad = tune_objective(s, p);
  CHECK(bad.penalty > ok.penalty);
  CHECK(bad.value > ok.value);
  CHECK(!constraint_diagnostics(s, spin_params(p)).empty());
}
