#include "qlm/lattice.hpp"

#include <algorithm>

namespace qlm {

void LatticeConfig::validate() const {
  if (n_sites < 2 || n_sites % 2 != 0 || n_sites > 24)
    throw ConfigError("n_sites must be even and in [2, 24], got " + std::to_string(n_sites));
  if (!(coupling > 0.0)) throw ConfigError("coupling J must be > 0");
  if (!std::isfinite(mass)) throw ConfigError("mass must be finite");
}

GaugeBasis::GaugeBasis(int n_sites) : n_(n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0 || n_sites > 24)
    throw ConfigError("n_sites must be even and in [2, 24], got " + std::to_string(n_sites));
  const uint32_t total = 1u << n_;
  for (uint32_t c = 0; c < total; ++c)
    if (valid(c)) codes_.push_back(c);
}

int GaugeBasis::matter_of(uint32_t code, int n) const {
  const int prev = (n - 1 + n_) % n_;
  return stagger(n) - link_of(code, prev) + link_of(code, n);
}

bool GaugeBasis::valid(uint32_t code) const {
  for (int n = 0; n < n_; ++n) {
    const int s = matter_of(code, n);
    if (s != 1 && s != -1) return false;
  }
  return true;
}

int GaugeBasis::find(uint32_t code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return -1;
  return static_cast<int>(it - codes_.begin());
}

GaugeBasis enumerate_gauge_basis(int n_sites) { return GaugeBasis(n_sites); }

SpMat build_hamiltonian(const LatticeConfig& cfg, const GaugeBasis& basis) {
  // J = 0 is allowed here (pure mass term); ground_state rejects its degenerate vacua
  LatticeConfig c = cfg;
  c.coupling = cfg.coupling == 0.0 ? 1.0 : cfg.coupling;
  c.validate();
  if (cfg.n_sites != basis.n_sites()) throw ConfigError("basis built for a different N");
  const int N = basis.n_sites(), D = basis.dim();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(D) * (N + 1));
  for (int i = 0; i < D; ++i) {
    double diag = 0.0;
    for (int n = 0; n < N; ++n) diag -= stagger(n) * 0.5 * cfg.mass * basis.matter_z(i, n);
    trip.emplace_back(i, i, diag);
    // sigma^+_n S^+_{n,n+1} sigma^-_{n+1}; the h.c. comes from the partner state
    const uint32_t c = basis.code(i);
    for (int n = 0; n < N; ++n) {
      const int n1 = (n + 1) % N;
      if (basis.matter_z(i, n) == -1 && basis.link_z(i, n) == -1 && basis.matter_z(i, n1) == 1) {
        const int j = basis.find(c ^ (1u << n));
        if (j < 0) throw NumericalError("hopping left the gauge sector");
        trip.emplace_back(j, i, 0.5 * cfg.coupling);
        trip.emplace_back(i, j, 0.5 * cfg.coupling);
      }
    }
  }
  SpMat H(D, D);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

Vec gauge_generator(int n, const GaugeBasis& basis) {
  const int N = basis.n_sites();
  if (n < 0 || n >= N) throw ConfigError("site index out of range");
  Vec g(basis.dim());
  for (int i = 0; i < basis.dim(); ++i)
    g(i) = basis.link_z(i, (n - 1 + N) % N) - basis.link_z(i, n) + basis.matter_z(i, n) - stagger(n);
  return g;
}

Vec gauge_generator_full(int n, int N) {
  if (N < 2 || N > 12) throw ConfigError("full-space generator limited to N <= 12");
  const uint64_t total = 1ull << (2 * N);
  Vec g(static_cast<Eigen::Index>(total));
  auto z = [](uint64_t s, int b) { return (s >> b & 1ull) ? -1 : 1; };
  for (uint64_t s = 0; s < total; ++s)
    g(static_cast<Eigen::Index>(s)) = z(s, (n - 1 + N) % N) - z(s, n) + z(s, N + n) - stagger(n);
  return g;
}

std::vector<int> symmetry_permutation(Symmetry kind, const GaugeBasis& basis) {
  const int N = basis.n_sites();
  std::vector<int> perm(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    uint32_t out = 0;
    for (int n = 0; n < N; ++n) {
      // target link index receives the flipped value of link n
      const int tgt = (kind == Symmetry::Parity) ? ((-n - 1) % N + N) % N : (n + 1) % N;
      if (basis.link_z(i, n) == 1) out |= 1u << tgt;  // -l stored as set bit
    }
    perm[i] = basis.find(out);
    if (perm[i] < 0) throw NumericalError("symmetry image left the gauge sector");
  }
  return perm;
}

SpMat symmetry_operator(Symmetry kind, const GaugeBasis& basis) {
  auto perm = symmetry_permutation(kind, basis);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < basis.dim(); ++i) trip.emplace_back(perm[i], i, 1.0);
  SpMat P(basis.dim(), basis.dim());
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

long long transfer_matrix_count(int n_sites) {
  if (n_sites < 2 || n_sites % 2) throw ConfigError("N must be even");
  // rows: link entering the site, cols: link leaving; index 0 is +1
  Eigen::Matrix2d A, B;
  A << 1, 1, 0, 1;  // even site: l_n - l_{n-1} in {0,-2}
  B << 1, 0, 1, 1;  // odd site:  l_n - l_{n-1} in {0, 2}
  Eigen::Matrix2d M = Eigen::Matrix2d::Identity(), AB = A * B;
  for (int k = 0; k < n_sites / 2; ++k) M = M * AB;
  return std::llround(M.trace());
}

}  // namespace qlm
