#pragma once
#include <functional>

#include "qlm/common.hpp"

namespace qlm {

struct EigenSystem {
  Vec values;   // ascending
  Mat vectors;  // columns
};

// full real-symmetric decomposition (LAPACK dsyevd)
EigenSystem eigh(const Mat& A);
// lowest k pairs (LAPACK dsyevr, range by index)
EigenSystem eigh_lowest(const Mat& A, int k);

// Lanczos with full reorthogonalisation; lowest k Ritz pairs
EigenSystem lanczos_lowest(const SpMat& H, int k, double tol = 1e-12, int max_iter = 400,
                           unsigned seed = 7);

// exp(-i H t) v by restarted Lanczos steps with a posteriori step control
class KrylovExp {
 public:
  explicit KrylovExp(const SpMat& H, int krylov_dim = 40, double tol = 1e-13);
  CVec step(const CVec& v, double t) const;

 private:
  const SpMat& H_;
  int m_;
  double tol_;
  double norm_est_;
  bool try_step(const CVec& v, double dt, CVec& out) const;
};

double inf_norm(const SpMat& H);

}  // namespace qlm
