#pragma once
#include <cstdint>
#include <vector>

#include "qlm/common.hpp"

namespace qlm {

struct LatticeConfig {
  int n_sites = 4;
  double mass = 1.0;
  double coupling = 1.0;

  void validate() const;
};

// Sector of vanishing Gauss-law generators. A state is stored only by its
// link configuration: bit n set <=> link (n,n+1) has S^z = -1.
class GaugeBasis {
 public:
  explicit GaugeBasis(int n_sites);

  int n_sites() const { return n_; }
  int dim() const { return static_cast<int>(codes_.size()); }
  uint32_t code(int i) const { return codes_[i]; }
  const std::vector<uint32_t>& codes() const { return codes_; }

  // -1 if the configuration is not in the sector
  int find(uint32_t code) const;

  int link_z(int i, int n) const { return link_of(codes_[i], n); }
  int matter_z(int i, int n) const { return matter_of(codes_[i], n); }

  static int link_of(uint32_t code, int n) { return (code >> n & 1u) ? -1 : 1; }
  int matter_of(uint32_t code, int n) const;
  bool valid(uint32_t code) const;

 private:
  int n_;
  std::vector<uint32_t> codes_;
};

inline int stagger(int n) { return (n % 2 == 0) ? 1 : -1; }

GaugeBasis enumerate_gauge_basis(int n_sites);

// real symmetric; mass and hopping per the staggered U(1) link model
SpMat build_hamiltonian(const LatticeConfig& cfg, const GaugeBasis& basis);

// diagonal of S^z_{n-1,n} - S^z_{n,n+1} + sigma^z_n - (-1)^n on the sector
Vec gauge_generator(int n, const GaugeBasis& basis);

// same generator on the unrestricted 2^(2N) space; index bits [0,N) are
// links, bits [N,2N) are matter (bit set <=> z = -1)
Vec gauge_generator_full(int n, int n_sites);

enum class Symmetry { Parity, Conjugation };

// image index of each basis state
std::vector<int> symmetry_permutation(Symmetry kind, const GaugeBasis& basis);
SpMat symmetry_operator(Symmetry kind, const GaugeBasis& basis);

// number of sector states from Tr((AB)^{N/2}), independent of enumeration
long long transfer_matrix_count(int n_sites);

}  // namespace qlm
