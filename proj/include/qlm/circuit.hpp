#pragma once
#include <string>

#include <json.hpp>

#include "qlm/common.hpp"

namespace qlm {

// Internal units: capacitances in farads, energies as angular frequencies
// in rad/ns (so 0.5*2pi GHz is stored as pi). Times are in ns.
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kElectron = 1.602176634e-19;
// C * hbar/(4e^2) turns a capacitance into ns when energies are in rad/ns
inline constexpr double kCapToNs = kHbar / (4.0 * kElectron * kElectron) * 1e9;
inline constexpr double kTwoPiGHz = 2.0 * kPi;         // rad/ns
inline constexpr double kTwoPiMHz = 2.0 * kPi * 1e-3;  // rad/ns

struct CircuitParams {
  double C = 50e-15, C0 = 50e-15, C1 = 50e-15, K = 1e-15;
  double E0 = 0, E1 = 0, Ec = 0, Es = 0;
  double EL = 0, EL0 = 0, EL1 = 0;

  void validate() const;
};

struct ModeScales {
  double r0, rg, r1;
  double kin0, king, kin1;  // inverse capacitance diagonals, 1/ns
};

struct SpinModelParams {
  double Omega0, Omegag, Omega1;
  double Jz_0g, Jz_01, Jz_g1, Jz_0g1;
  double Jx_0g1;
  double alpha0, alphag, alpha1;
};

ModeScales mode_scales(const CircuitParams& p);
SpinModelParams spin_params(const CircuitParams& p);

// <m|exp(ik(a^dag + a))|n> for the lowest n levels
CMat displacement_block(double k, int n_levels);
// same from a brute-force matrix exponential in a large Fock space
CMat displacement_block_bruteforce(double k, int n_levels, int big = 60);

// exact truncation; basis index = n0*n^2 + ng*n + n1, Fock 0 is sigma^z = +1
CMat build_multilevel_hamiltonian(const CircuitParams& p, int n_levels);

// the two-level spin model assembled from spin parameters (8x8)
CMat spin_hamiltonian(const SpinModelParams& s);

// omega_prs for p,r,s in {+1,-1}; mass enters as Omega0 - m and Omega1 + m
double omega_prs(const SpinModelParams& s, int p, int r, int q, double mass = 0.0);

// Fock index of the spin state (b0, bg, b1), bits 1 = excited
inline int fock_index(int b0, int bg, int b1, int n_levels) { return (b0 * n_levels + bg) * n_levels + b1; }

nlohmann::json to_json(const CircuitParams& p);
CircuitParams circuit_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpinModelParams& s);
SpinModelParams spin_from_json(const nlohmann::json& j);

}  // namespace qlm
