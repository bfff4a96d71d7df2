#include "qlm/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "qlm/dynamics.hpp"

namespace qlm {

void TuneSpec::validate() const {
  if (!(std::abs(target_ratio) > 0 && std::abs(target_ratio) <= 10)) throw ConfigError("|target_ratio| must be in (0, 10]");
  if (!(target_mass != 0 && std::isfinite(target_mass))) throw ConfigError("target_mass must be nonzero");
  if (!(K > 0) || !(Es >= 0)) throw ConfigError("K must be positive and Es nonnegative");
  for (int i = 0; i < 6; ++i) {
    if (!(bounds[i].lo > 0 && bounds[i].hi > bounds[i].lo)) throw ConfigError("bounds must be positive and ordered");
    if (nominal[i] < bounds[i].lo || nominal[i] > bounds[i].hi) throw ConfigError("nominal point outside bounds");
  }
  if (!(alpha_min >= 0) || !(hierarchy > 0) || !(penalty >= 0)) throw ConfigError("bad constraint settings");
  if (starts < 1 || budget < 10 || polish_rounds < 0) throw ConfigError("bad search budget");
  if (n_levels < 3 || n_levels > 8) throw ConfigError("tuning needs 3..8 levels per mode");
}

CircuitParams params_from_free(const TuneSpec& spec, const FreeVec& x) {
  CircuitParams p;
  p.C = x[0];
  p.C0 = x[1];
  p.C1 = x[2];
  p.K = spec.K;
  p.E0 = x[3];
  p.E1 = x[4];
  p.Ec = x[5];
  p.Es = spec.Es;
  return p;
}

FreeVec free_from_params(const CircuitParams& p) { return {p.C, p.C0, p.C1, p.E0, p.E1, p.Ec}; }

namespace {

// root of g on [lo, hi] by bisection in log space; false without a sign change
bool log_bisect(const std::function<double(double)>& g, double lo, double hi, double& root) {
  double a = std::log(lo), b = std::log(hi), ga = g(lo), gb = g(hi);
  if (!(ga * gb <= 0)) return false;
  for (int it = 0; it < 100; ++it) {
    const double c = 0.5 * (a + b), gc = g(std::exp(c));
    if ((gc <= 0) == (ga <= 0)) { a = c; ga = gc; } else { b = c; }
  }
  root = std::exp(0.5 * (a + b));
  return true;
}

double hinge2(double excess, double unit) { return excess > 0 ? std::pow(excess / unit, 2) : 0.0; }

}  // namespace

CircuitParams bare_seed(const TuneSpec& spec, int index) {
  FreeVec x = spec.nominal;
  if (index > 0) {
    std::mt19937_64 rng(spec.seed * 1000003ULL + index);
    std::normal_distribution<double> nd(0.0, spec.jitter);
    for (int i = 0; i < 6; ++i) x[i] = std::clamp(x[i] * std::exp(nd(rng)), spec.bounds[i].lo, spec.bounds[i].hi);
  }
  const double dstar = spec.delta_target(), jstar = std::abs(spec.j_target());
  for (int sweep = 0; sweep < 4; ++sweep) {
    double r;
    auto jx = [&](double e0) {
      FreeVec y = x;
      y[3] = e0;
      return std::abs(spin_params(params_from_free(spec, y)).Jx_0g1) - jstar;
    };
    if (log_bisect(jx, spec.bounds[3].lo, spec.bounds[3].hi, r)) x[3] = r;
    auto res = [&](double e1) {
      FreeVec y = x;
      y[4] = e1;
      return omega_prs(spin_params(params_from_free(spec, y)), +1, +1, -1) - dstar;
    };
    if (log_bisect(res, spec.bounds[4].lo, spec.bounds[4].hi, r)) x[4] = r;
  }
  return params_from_free(spec, x);
}

std::vector<std::string> constraint_diagnostics(const TuneSpec& spec, const SpinModelParams& s) {
  std::vector<std::string> out;
  auto mhz = [](double v) { return v / kTwoPiMHz; };
  const double alphas[3] = {s.alpha0, s.alphag, s.alpha1};
  const double omegas[3] = {s.Omega0, s.Omegag, s.Omega1};
  const double jz[4] = {s.Jz_0g, s.Jz_01, s.Jz_g1, s.Jz_0g1};
  const char* an[3] = {"alpha0", "alphag", "alpha1"};
  for (int j = 0; j < 3; ++j) {
    std::ostringstream os;
    if (std::abs(alphas[j]) < spec.alpha_min) {
      os << "|" << an[j] << "| = " << mhz(std::abs(alphas[j])) << " MHz below " << mhz(spec.alpha_min) << " MHz";
      out.push_back(os.str());
    }
    if (std::abs(s.Jx_0g1) > spec.hierarchy * std::abs(alphas[j])) {
      std::ostringstream o2;
      o2 << "|Jx| exceeds " << spec.hierarchy << " |" << an[j] << "|";
      out.push_back(o2.str());
    }
    for (double z : jz)
      if (std::abs(z) > spec.hierarchy * omegas[j]) {
        out.push_back("a Jz coupling exceeds the hierarchy ratio against Omega");
        break;
      }
  }
  return out;
}

Objective tune_objective(const TuneSpec& spec, const CircuitParams& p) {
  Objective o{};
  const double u = kTwoPiMHz;
  const SpinModelParams s = spin_params(p);
  const double alphas[3] = {s.alpha0, s.alphag, s.alpha1};
  const double omegas[3] = {s.Omega0, s.Omegag, s.Omega1};
  const double jz[4] = {s.Jz_0g, s.Jz_01, s.Jz_g1, s.Jz_0g1};
  for (int j = 0; j < 3; ++j) {
    o.penalty += spec.penalty * hinge2(spec.alpha_min - std::abs(alphas[j]), u);
    o.penalty += spec.penalty * hinge2(std::abs(s.Jx_0g1) - spec.hierarchy * std::abs(alphas[j]), u);
    for (double z : jz) o.penalty += spec.penalty * hinge2(std::abs(z) - spec.hierarchy * omegas[j], u);
  }
  try {
    o.eff = extract_effective_params(p, spec.n_levels);
    o.fit_ok = true;
    o.fit = std::pow((o.eff.delta_eff - spec.delta_target()) / u, 2) + std::pow((o.eff.j_eff - spec.j_target()) / u, 2);
  } catch (const NumericalError&) {
    o.fit_ok = false;
    o.fit = 1e9;
  }
  o.value = o.fit + o.penalty;
  return o;
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          double step, int budget, double ftol) {
  const int n = static_cast<int>(x0.size());
  std::vector<std::vector<double>> X(n + 1, x0);
  std::vector<double> F(n + 1);
  SimplexResult r;
  r.evals = 0;
  double best = std::numeric_limits<double>::infinity();
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++r.evals;
    best = std::min(best, v);
    r.trace.push_back(best);
    return v;
  };
  for (int i = 0; i < n; ++i) X[i + 1][i] += step;
  for (int i = 0; i <= n && r.evals < budget; ++i) F[i] = eval(X[i]);
  std::vector<int> ord(n + 1);
  auto sort = [&] {
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return F[a] < F[b]; });
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> y(n);
    for (int k = 0; k < n; ++k) y[k] = c[k] + t * (w[k] - c[k]);
    return y;
  };
  while (r.evals < budget) {
    sort();
    const int lo = ord[0], hi = ord[n], nh = ord[n - 1];
    if (std::abs(F[hi] - F[lo]) <= ftol * (std::abs(F[lo]) + 1e-30)) break;
    std::vector<double> c(n, 0.0);
    for (int i = 0; i <= n; ++i)
      if (i != hi)
        for (int k = 0; k < n; ++k) c[k] += X[i][k] / n;
    const auto xr = along(c, X[hi], -1.0);
    const double fr = eval(xr);
    if (fr < F[lo]) {
      const auto xe = along(c, X[hi], -2.0);
      const double fe = r.evals < budget ? eval(xe) : fr;
      if (fe < fr) { X[hi] = xe; F[hi] = fe; } else { X[hi] = xr; F[hi] = fr; }
    } else if (fr < F[nh]) {
      X[hi] = xr;
      F[hi] = fr;
    } else {
      const bool outside = fr < F[hi];
      const auto xc = along(c, outside ? xr : X[hi], 0.5);
      const double fc = r.evals < budget ? eval(xc) : F[hi];
      if (fc < (outside ? fr : F[hi])) {
        X[hi] = xc;
        F[hi] = fc;
      } else {
        for (int i = 0; i <= n && r.evals < budget; ++i) {
          if (i == lo) continue;
          X[i] = along(X[lo], X[i], 0.5);
          F[i] = eval(X[i]);
        }
      }
    }
  }
  sort();
  r.x = X[ord[0]];
  r.f = F[ord[0]];
  return r;
}

namespace {

// simplex coordinates: log of each free parameter, clamped into the box
struct LogMap {
  const TuneSpec& spec;
  FreeVec to_free(const std::vector<double>& y) const {
    FreeVec x;
    for (int i = 0; i < 6; ++i) x[i] = std::clamp(std::exp(y[i]), spec.bounds[i].lo, spec.bounds[i].hi);
    return x;
  }
  double box_penalty(const std::vector<double>& y) const {
    double s = 0;
    for (int i = 0; i < 6; ++i) {
      s += std::pow(std::max(0.0, std::log(spec.bounds[i].lo) - y[i]), 2);
      s += std::pow(std::max(0.0, y[i] - std::log(spec.bounds[i].hi)), 2);
    }
    return 1e6 * s;
  }
  std::vector<double> from_params(const CircuitParams& p) const {
    const FreeVec x = free_from_params(p);
    std::vector<double> y(6);
    for (int i = 0; i < 6; ++i) y[i] = std::log(x[i]);
    return y;
  }
};

}  // namespace

TuneResult tune(const TuneSpec& spec) {
  spec.validate();
  const LogMap map{spec};
  auto f = [&](const std::vector<double>& y) {
    return tune_objective(spec, params_from_free(spec, map.to_free(y))).value + map.box_penalty(y);
  };
  std::vector<StartReport> starts(spec.starts);
  std::vector<std::vector<double>> xs(spec.starts);
  parallel_for(spec.starts, spec.threads, [&](int i) {
    StartReport& s = starts[i];
    s.seed = bare_seed(spec, i);
    const SimplexResult r = nelder_mead(f, map.from_params(s.seed), 0.05, spec.budget);
    xs[i] = r.x;
    s.best = params_from_free(spec, map.to_free(r.x));
    s.objective = r.f;
    s.evals = r.evals;
    s.trace = r.trace;
  });
  int bi = 0;
  for (int i = 1; i < spec.starts; ++i)
    if (starts[i].objective < starts[bi].objective) bi = i;
  std::vector<double> x = xs[bi];
  double fx = starts[bi].objective;
  for (int round = 0; round < spec.polish_rounds; ++round) {
    const SimplexResult r = nelder_mead(f, x, 0.01, spec.budget);
    if (r.f < fx) {
      x = r.x;
      fx = r.f;
    }
  }
  TuneResult out;
  out.params = params_from_free(spec, map.to_free(x));
  const Objective o = tune_objective(spec, out.params);
  out.eff = o.eff;
  out.objective = o.value;
  out.spin = spin_params(out.params);
  out.diagnostics = constraint_diagnostics(spec, out.spin);
  if (!o.fit_ok) out.diagnostics.push_back("effective-parameter fit failed at the returned point");
  out.feasible = out.diagnostics.empty();
  out.starts = std::move(starts);
  return out;
}

nlohmann::json TuneResult::report(const TuneSpec& spec) const {
  const double u = kTwoPiMHz;
  nlohmann::json j;
  j["spec"] = {{"target_ratio", spec.target_ratio}, {"target_mass_2pi_MHz", spec.target_mass / u},
               {"K", spec.K}, {"Es_2pi_MHz", spec.Es / u}, {"alpha_min_2pi_MHz", spec.alpha_min / u},
               {"hierarchy", spec.hierarchy}, {"starts", spec.starts}, {"budget", spec.budget},
               {"polish_rounds", spec.polish_rounds}, {"seed", spec.seed}};
  for (const auto& s : starts)
    j["starts"].push_back({{"seed_params", to_json(s.seed)}, {"best_params", to_json(s.best)},
                           {"objective", s.objective}, {"evals", s.evals}, {"trace", s.trace}});
  j["params"] = to_json(params);
  j["spin"] = to_json(spin);
  j["objective"] = objective;
  j["feasible"] = feasible;
  j["diagnostics"] = diagnostics;
  j["verification"] = {{"delta_eff_2pi_MHz", eff.delta_eff / u},
                       {"j_eff_2pi_MHz", eff.j_eff / u},
                       {"ratio_4J_over_Delta", 4 * eff.j_eff / eff.delta_eff},
                       {"fit_residual", eff.fit_residual},
                       {"omega_ppm_2pi_MHz", omega_prs(spin, +1, +1, -1) / u},
                       {"omega_mmp_2pi_MHz", omega_prs(spin, -1, -1, +1) / u},
                       {"alpha_2pi_MHz", {spin.alpha0 / u, spin.alphag / u, spin.alpha1 / u}}};
  return j;
}

}  // namespace qlm
