#include "qlm/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <random>

namespace qlm {

EigenSystem eigh(const Mat& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  EigenSystem es;
  es.vectors = A;
  es.values.resize(n);
  if (n == 0) return es;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, es.vectors.data(), n, es.values.data());
  if (info != 0) throw NumericalError("dsyevd failed, info=" + std::to_string(info));
  return es;
}

EigenSystem eigh_lowest(const Mat& A, int k) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  k = std::min<int>(k, n);
  Mat work = A;
  Vec w(n);
  Mat z(n, k);
  std::vector<lapack_int> isuppz(2 * std::max(k, 1));
  lapack_int found = 0;
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0, 1, k,
                                   0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != k) throw NumericalError("dsyevr failed, info=" + std::to_string(info));
  return {w.head(k), z};
}

double inf_norm(const SpMat& H) {
  Vec rows = Vec::Zero(H.rows());
  for (int c = 0; c < H.outerSize(); ++c)
    for (SpMat::InnerIterator it(H, c); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

EigenSystem lanczos_lowest(const SpMat& H, int k, double tol, int max_iter, unsigned seed) {
  const int n = static_cast<int>(H.rows());
  if (n <= std::max(64, 2 * k)) return eigh_lowest(Mat(H), k);
  max_iter = std::min(max_iter, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Mat Q(n, max_iter + 1);
  Vec q = Vec::NullaryExpr(n, [&]() { return nd(rng); });
  Q.col(0) = q.normalized();
  std::vector<double> alpha, beta;
  const double hn = std::max(inf_norm(H), 1e-300);
  EigenSystem ritz;
  for (int j = 0; j < max_iter; ++j) {
    Vec w = H * Q.col(j);
    alpha.push_back(Q.col(j).dot(w));
    // two passes of classical Gram-Schmidt against all previous vectors
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
    const double b = w.norm();
    const int m = j + 1;
    if (m >= k && (m % 5 == 0 || b < 1e-14 * hn || m == max_iter)) {
      Mat T = Mat::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Mat> es(T);
      bool ok = true;
      for (int i = 0; i < k; ++i)
        if (b * std::abs(es.eigenvectors()(m - 1, i)) > tol * hn) ok = false;
      if (ok || b < 1e-14 * hn || m == max_iter) {
        ritz.values = es.eigenvalues().head(k);
        ritz.vectors = Q.leftCols(m) * es.eigenvectors().leftCols(k);
        if (!ok && b >= 1e-14 * hn) throw NumericalError("Lanczos did not converge");
        return ritz;
      }
    }
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  throw NumericalError("Lanczos did not converge");
}

KrylovExp::KrylovExp(const SpMat& H, int krylov_dim, double tol)
    : H_(H), m_(krylov_dim), tol_(tol), norm_est_(std::max(inf_norm(H), 1e-300)) {}

bool KrylovExp::try_step(const CVec& v, double dt, CVec& out) const {
  const int n = static_cast<int>(v.size());
  const double b0 = v.norm();
  if (b0 == 0.0) {
    out = v;
    return true;
  }
  const int mmax = std::min(m_, n);
  CMat Q(n, mmax);
  Q.col(0) = v / b0;
  std::vector<double> alpha, beta;
  double tail = 0.0;
  int m = 0;
  for (int j = 0; j < mmax; ++j) {
    CVec w(n);
    w.real() = H_ * Q.col(j).real();
    w.imag() = H_ * Q.col(j).imag();
    alpha.push_back(Q.col(j).dot(w).real());
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).adjoint() * w);
    const double b = w.norm();
    m = j + 1;
    tail = b;
    if (b < 1e-14 * norm_est_ || j + 1 == mmax) break;
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  Mat T = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  CVec ph = (-kI * es.eigenvalues() * dt).array().exp();
  CVec y = es.eigenvectors().cast<cplx>() * (ph.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cplx>());
  const bool breakdown = tail < 1e-14 * norm_est_;
  if (!breakdown && m < n && tail * std::abs(y(m - 1)) > tol_) return false;
  out = b0 * (Q.leftCols(m) * y);
  return true;
}

CVec KrylovExp::step(const CVec& v, double t) const {
  if (t == 0.0) return v;
  CVec cur = v;
  double done = 0.0;
  double dt = std::min(t, 0.5 * m_ / norm_est_);
  while (done < t) {
    const double h = std::min(dt, t - done);
    CVec nxt;
    if (try_step(cur, h, nxt)) {
      cur = std::move(nxt);
      done += h;
      dt = 1.25 * h;
    } else {
      dt = 0.5 * h;
      if (dt < 1e-12 * t) throw NumericalError("Krylov step size underflow");
    }
  }
  return cur;
}

}  // namespace qlm
