#include "qlm/dynamics.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace qlm {

GroundState ground_state(const SpMat& H) {
  const int n = static_cast<int>(H.rows());
  if (n == 0) throw ConfigError("empty Hamiltonian");
  const double hn = std::max(inf_norm(H), 1e-300);
  if ((SpMat(H.transpose()) - H).norm() > 1e-12 * hn * std::sqrt(double(n)))
    throw ConfigError("Hamiltonian is not symmetric");
  EigenSystem es = n <= kSpectralMaxDim ? eigh_lowest(Mat(H), std::min(2, n)) : lanczos_lowest(H, 2);
  GroundState gs;
  gs.energy = es.values(0);
  gs.gap = n > 1 ? es.values(1) - es.values(0) : std::numeric_limits<double>::infinity();
  if (gs.gap <= 1e-9 * hn) throw NumericalError("degenerate ground state (gap " + std::to_string(gs.gap) + ")");
  gs.state = es.vectors.col(0).normalized();
  Eigen::Index imax;
  gs.state.cwiseAbs().maxCoeff(&imax);
  if (gs.state(imax) < 0) gs.state = -gs.state;
  return gs;
}

GroundState symmetric_ground_state(const SpMat& H, const GaugeBasis& basis) {
  const int n = basis.dim();
  if (H.rows() != n) throw ConfigError("basis/Hamiltonian mismatch");
  const auto C = symmetry_permutation(Symmetry::Conjugation, basis);
  // orbit sums of C, normalised
  std::vector<int> orbit(n, -1);
  std::vector<std::vector<int>> members;
  for (int i = 0; i < n; ++i) {
    if (orbit[i] >= 0) continue;
    members.emplace_back();
    for (int j = i; orbit[j] < 0; j = C[j]) {
      orbit[j] = static_cast<int>(members.size()) - 1;
      members.back().push_back(j);
    }
  }
  std::vector<Eigen::Triplet<double>> tr;
  for (int k = 0; k < static_cast<int>(members.size()); ++k)
    for (int j : members[k]) tr.emplace_back(j, k, 1.0 / std::sqrt(double(members[k].size())));
  SpMat Q(n, static_cast<int>(members.size()));
  Q.setFromTriplets(tr.begin(), tr.end());
  const SpMat Hs = SpMat(Q.transpose() * H * Q);
  GroundState g = ground_state(Hs);
  g.state = (Q * g.state).normalized();
  return g;
}

Propagator::Propagator(const SpMat& H, PropMethod method) : H_(H) {
  spectral_ = method == PropMethod::Spectral || (method == PropMethod::Auto && H.rows() <= kSpectralMaxDim);
  if (spectral_) es_ = eigh(Mat(H));
}

std::vector<CVec> Propagator::evolve(const CVec& psi0, const std::vector<double>& times) const {
  if (psi0.size() != H_.rows()) throw ConfigError("state dimension mismatch");
  std::vector<CVec> out;
  out.reserve(times.size());
  double prev = 0.0;
  for (double t : times) {
    if (t < 0 || t < prev) throw ConfigError("times must be nonnegative and ascending");
    prev = t;
  }
  if (spectral_) {
    const CMat V = es_.vectors.cast<cplx>();
    const CVec c = V.adjoint() * psi0;
    for (double t : times) {
      CVec ph = (-kI * es_.values * t).array().exp();
      out.push_back(V * ph.cwiseProduct(c));
    }
  } else {
    KrylovExp kexp(H_);
    CVec cur = psi0;
    prev = 0.0;
    for (double t : times) {
      cur = kexp.step(cur, t - prev);
      prev = t;
      out.push_back(cur);
    }
  }
  return out;
}

std::vector<double> physical_times(const std::vector<double>& tm, double mass) {
  if (mass == 0.0) throw ConfigError("t*m axis needs a nonzero mass");
  std::vector<double> t(tm.size());
  for (size_t i = 0; i < tm.size(); ++i) t[i] = tm[i] / std::abs(mass);
  return t;
}

QuenchSetup prepare_quench(const LatticeConfig& cfg) {
  cfg.validate();
  if (cfg.mass == 0.0) throw ConfigError("mass quench needs m != 0");
  QuenchSetup q{GaugeBasis(cfg.n_sites), {}, {}, {}, 1.0 / std::abs(cfg.mass)};
  q.H_pre = build_hamiltonian(cfg, q.basis);
  LatticeConfig post = cfg;
  post.mass = -cfg.mass;
  q.H_post = build_hamiltonian(post, q.basis);
  q.gs = symmetric_ground_state(q.H_pre, q.basis);
  return q;
}

static void fill_rates(QuenchResult& r, int N) {
  for (auto& g : r.amplitude) {
    const double L = std::norm(g);
    r.echo.push_back(L);
    r.rate.push_back(L > 0 ? -std::log(L) / N : std::numeric_limits<double>::infinity());
  }
}

QuenchResult loschmidt_trace(const LatticeConfig& cfg, const std::vector<double>& tm, PropMethod method) {
  QuenchSetup q = prepare_quench(cfg);
  Propagator prop(q.H_post, method);
  const CVec psi0 = q.gs.state.cast<cplx>();
  auto states = prop.evolve(psi0, physical_times(tm, cfg.mass));
  QuenchResult r;
  r.times = tm;
  for (auto& s : states) {
    r.amplitude.push_back(psi0.dot(s));
    double z = 0.0;
    for (int i = 0; i < q.basis.dim(); ++i) z += std::norm(s(i)) * q.basis.matter_z(i, 0);
    r.sigma0z.push_back(z);
  }
  fill_rates(r, cfg.n_sites);
  return r;
}

ObservableTrace observables_trace(const std::vector<CVec>& states, const GaugeBasis& basis) {
  const int T = static_cast<int>(states.size()), N = basis.n_sites();
  ObservableTrace o{Mat::Zero(T, N), Mat::Zero(T, N), Mat::Zero(T, N), Mat::Zero(T, N)};
  for (int t = 0; t < T; ++t) {
    const CVec& s = states[t];
    for (int i = 0; i < basis.dim(); ++i) {
      const double p = std::norm(s(i));
      for (int n = 0; n < N; ++n) {
        o.sigma_z(t, n) += p * basis.matter_z(i, n);
        o.link_z(t, n) += p * basis.link_z(i, n);
      }
    }
    // sigma^x,y flip one matter spin with the links fixed. Matter is a
    // function of the links, so the only sector candidate for the image is
    // the same link configuration, which carries the unflipped value.
    for (int n = 0; n < N; ++n) {
      cplx ex = 0.0, ey = 0.0;
      for (int i = 0; i < basis.dim(); ++i) {
        const int z = basis.matter_z(i, n);
        const int j = basis.find(basis.code(i));
        if (j >= 0 && basis.matter_z(j, n) == -z) {
          ex += std::conj(s(j)) * s(i);
          ey += std::conj(s(j)) * s(i) * cplx(0.0, z > 0 ? -1.0 : 1.0);
        }
      }
      o.sigma_x(t, n) = ex.real();
      o.sigma_y(t, n) = ey.real();
    }
  }
  return o;
}

void ScanGrid::validate() const {
  if (samples.rows() != static_cast<Eigen::Index>(x.values.size()) ||
      samples.cols() != static_cast<Eigen::Index>(y.values.size()))
    throw ConfigError("scan grid is not rectangular");
  auto mono = [](const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (!mono(x.values) || !mono(y.values)) throw ConfigError("scan axes must be strictly increasing");
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0) || hi < lo) throw ConfigError("bad grid range");
  const long n = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (long i = 0; i < n; ++i) v[i] = lo + step * i;
  return v;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&]() {
      for (int i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

ScanGrid loschmidt_scan(int n_sites, const std::vector<double>& j_over_m, const std::vector<double>& tm,
                        int threads) {
  if (j_over_m.empty() || tm.empty()) throw ConfigError("empty scan grid");
  ScanGrid g{{"J_over_m", j_over_m}, {"t_m", tm}, CMat(j_over_m.size(), tm.size())};
  g.validate();
  parallel_for(static_cast<int>(j_over_m.size()), threads, [&](int ix) {
    LatticeConfig cfg{n_sites, 1.0, j_over_m[ix]};
    QuenchSetup q = prepare_quench(cfg);
    Propagator prop(q.H_post);
    if (prop.spectral()) {
      // G(t) = sum_k |<k|psi0>|^2 exp(-i E_k t)
      const auto& es = prop.eigensystem();
      const Vec w = (es.vectors.transpose() * q.gs.state).array().square();
      for (size_t it = 0; it < tm.size(); ++it) {
        cplx s = 0.0;
        for (int k = 0; k < w.size(); ++k) s += w(k) * std::exp(-kI * es.values(k) * tm[it]);
        g.samples(ix, it) = s;
      }
    } else {
      const CVec psi0 = q.gs.state.cast<cplx>();
      auto states = prop.evolve(psi0, tm);
      for (size_t it = 0; it < tm.size(); ++it) g.samples(ix, it) = psi0.dot(states[it]);
    }
  });
  return g;
}

}  // namespace qlm
