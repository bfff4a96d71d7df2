#pragma once
#include <array>
#include <vector>

#include "qlm/lattice.hpp"

namespace qlm {

// N=2 closed form in the state labels 1=(+,+), 2=(-,+), 3=(-,-) which are
// also the ascending basis order. psi_i = a_i(|1>+|3>) + b_i|2>.
struct N2Solution {
  double m, J, y, x;
  double p[2], a[2], b[2];
  double energy[2];   // E_1 = +J sqrt(y^2+1/2), E_2 = -J sqrt(y^2+1/2)
  double energy_minus;  // psi_- = (|1>-|3>)/sqrt2, E = -m

  Mat eigenvectors() const;  // columns psi_1, psi_2, psi_-
  Vec energies() const;
};

N2Solution n2_solution(double m, double J);

struct LoschmidtZero {
  int n;
  double j_over_m;
  double t;  // physical time
};

// t_n = (2n+1) pi / sqrt(4m^2 + 2J^2)
double n2_zero_time(double m, double J, int n);
// zeros exist only at J/m = sqrt2; n counts from n_first
std::vector<LoschmidtZero> n2_loschmidt_zeros(double m, int n_first, int n_last);

struct OrderZero {
  double k;
  double t;
  int n;
  int family;  // +1 or -1
};

double n2_order_zero_time(double m, double J, int n);
// family +: even n (from n = 0), needs x >= sqrt2; family -: odd n, needs x >= sqrt(2 sqrt5 - 4)
std::vector<OrderZero> n2_order_zeros(double m, double J, int n_max);

// N=4 closed form in the paper's seven state labels (index 0 <-> label 1)
struct N4Solution {
  double m, J, y;
  double Q, R, D;
  cplx S;
  std::array<double, 3> p, a, b, c, energy;
  std::array<double, 2> pp, ap, bp, energy_p;

  Mat eigenvectors() const;  // 7x7: psi_1..3, psi_+, psi_-, psi'_1, psi'_2
  Vec energies() const;
};

N4Solution n4_solution(double m, double J);

// basis index for each of the paper's labels 1..7 (P maps 1<->7, 2<->5, 3<->6)
std::array<int, 7> n4_label_map(const GaugeBasis& basis);

}  // namespace qlm
