#include "qlm/string_order.hpp"

namespace qlm {

namespace {

// sigma_n^+ (prod S^alpha over the path) sigma_m^- on one basis state.
// Returns the image code, or UINT32_MAX if the state is annihilated.
uint32_t apply_string(const GaugeBasis& b, int i, int m, int n, int dir) {
  const int N = b.n_sites();
  if (b.matter_z(i, m) != 1 || b.matter_z(i, n) != -1) return UINT32_MAX;
  uint32_t c = b.code(i);
  // clockwise lowers links m..n-1, counter-clockwise raises links m-1..n
  int link = dir > 0 ? m : (m - 1 + N) % N;
  const int need = dir > 0 ? 1 : -1;
  const int len = dir > 0 ? ((n - m) % N + N) % N : ((m - n) % N + N) % N;
  for (int s = 0; s < len; ++s) {
    if (GaugeBasis::link_of(c, link) != need) return UINT32_MAX;
    c ^= 1u << link;
    link = dir > 0 ? (link + 1) % N : (link - 1 + N) % N;
  }
  return c;
}

}  // namespace

CSpMat build_string_operator(double k, const GaugeBasis& basis) {
  const int N = basis.n_sites(), D = basis.dim();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < N; ++n) {
      const int dc = ((n - m) % N + N) % N;
      for (int i = 0; i < D; ++i) {
        if (dc == 0) {
          if (basis.matter_z(i, m) == 1) trip.emplace_back(i, i, 1.0);
          continue;
        }
        for (int dir : {+1, -1}) {
          const int d = dir > 0 ? dc : -(N - dc);
          if (2 * std::abs(d) > N) continue;  // not a shortest path
          const uint32_t c = apply_string(basis, i, m, n, dir);
          if (c == UINT32_MAX) continue;
          const int j = basis.find(c);
          if (j < 0) throw NumericalError("string operator left the gauge sector");
          trip.emplace_back(j, i, std::exp(-kI * (k * d)));
        }
      }
    }
  }
  CSpMat g(D, D);
  g.setFromTriplets(trip.begin(), trip.end());
  return g;
}

std::vector<double> default_k_grid(int n) {
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) k[i] = kPi * i / (n - 1);
  return k;
}

ScanGrid order_param_scan(const LatticeConfig& cfg, const std::vector<double>& k,
                          const std::vector<double>& tm, int threads) {
  if (k.empty() || tm.empty()) throw ConfigError("empty scan grid");
  QuenchSetup q = prepare_quench(cfg);
  Propagator prop(q.H_post);
  const CVec psi0 = q.gs.state.cast<cplx>();
  const auto states = prop.evolve(psi0, physical_times(tm, cfg.mass));
  ScanGrid g{{"k", k}, {"t_m", tm}, CMat(k.size(), tm.size())};
  g.validate();
  parallel_for(static_cast<int>(k.size()), threads, [&](int ik) {
    // <psi0| g |psi(t)> = (g^dag psi0)^dag psi(t)
    const CVec bra = build_string_operator(k[ik], q.basis).adjoint() * psi0;
    for (size_t it = 0; it < tm.size(); ++it) g.samples(ik, it) = bra.dot(states[it]);
  });
  return g;
}

}  // namespace qlm
