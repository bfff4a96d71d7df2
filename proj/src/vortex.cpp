#include "qlm/vortex.hpp"

#include <cmath>

namespace qlm {

double wrap_angle(double delta) {
  if (!std::isfinite(delta)) throw NumericalError("wrap_angle: non-finite input");
  double r = std::remainder(delta, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

namespace {

double dphase(cplx a, cplx b) { return wrap_angle(std::arg(b) - std::arg(a)); }

void check_size(const ScanGrid& g) {
  if (g.samples.rows() < 2 || g.samples.cols() < 2) throw ConfigError("vortex scan needs a grid of at least 2x2");
}

// wrapped phase increments along +x and +y edges; every edge is wrapped once
// and reused with opposite sign by its two neighbours, so plaquette sums
// telescope to the boundary sum exactly
struct Edges {
  Mat dx, dy;
  explicit Edges(const CMat& f) : dx(f.rows() - 1, f.cols()), dy(f.rows(), f.cols() - 1) {
    for (int i = 0; i + 1 < f.rows(); ++i)
      for (int j = 0; j < f.cols(); ++j) dx(i, j) = dphase(f(i, j), f(i + 1, j));
    for (int i = 0; i < f.rows(); ++i)
      for (int j = 0; j + 1 < f.cols(); ++j) dy(i, j) = dphase(f(i, j), f(i, j + 1));
  }
};

int to_winding(double s) { return static_cast<int>(std::lround(s / (2.0 * kPi))); }

}  // namespace

VortexScan plaquette_windings(const ScanGrid& grid) {
  check_size(grid);
  const CMat& f = grid.samples;
  const Edges e(f);
  VortexScan out;
  for (int ix = 0; ix + 1 < f.rows(); ++ix) {
    for (int iy = 0; iy + 1 < f.cols(); ++iy) {
      const cplx z(0.0, 0.0);
      if (f(ix, iy) == z || f(ix + 1, iy) == z || f(ix + 1, iy + 1) == z || f(ix, iy + 1) == z) {
        out.indeterminate.emplace_back(ix, iy);
        continue;
      }
      const int w = to_winding(e.dx(ix, iy) + e.dy(ix + 1, iy) - e.dx(ix, iy + 1) - e.dy(ix, iy));
      if (w != 0) {
        out.vortices.push_back({ix, iy, w});
        out.max_abs_winding = std::max(out.max_abs_winding, std::abs(w));
      }
    }
  }
  return out;
}

int boundary_winding(const ScanGrid& grid) {
  check_size(grid);
  const CMat& f = grid.samples;
  const int nx = static_cast<int>(f.rows()), ny = static_cast<int>(f.cols());
  for (int i = 0; i < nx; ++i)
    if (f(i, 0) == 0.0 || f(i, ny - 1) == 0.0) throw NumericalError("boundary passes through an exact zero");
  for (int j = 0; j < ny; ++j)
    if (f(0, j) == 0.0 || f(nx - 1, j) == 0.0) throw NumericalError("boundary passes through an exact zero");
  const Edges e(f);
  double s = 0.0;
  for (int i = 0; i < nx - 1; ++i) s += e.dx(i, 0) - e.dx(i, ny - 1);
  for (int j = 0; j < ny - 1; ++j) s += e.dy(nx - 1, j) - e.dy(0, j);
  return to_winding(s);
}

}  // namespace qlm
