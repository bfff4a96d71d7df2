#pragma once
#include "qlm/dynamics.hpp"

namespace qlm {

// gauge-invariant string operator g(k); k in units of 1/a
CSpMat build_string_operator(double k, const GaugeBasis& basis);

// g(k,t) = <psi(0)| g(k) |psi(t)> after the m -> -m quench; x axis k, y axis t*m
ScanGrid order_param_scan(const LatticeConfig& cfg, const std::vector<double>& k,
                          const std::vector<double>& tm, int threads = 0);

std::vector<double> default_k_grid(int n = 64);

}  // namespace qlm
