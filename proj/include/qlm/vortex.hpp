#pragma once
#include <vector>

#include "qlm/dynamics.hpp"

namespace qlm {

// delta + 2 pi n in (-pi, pi]
double wrap_angle(double delta);

struct Vortex {
  int ix, iy;  // lower-left corner of the plaquette
  int winding;
};

struct VortexScan {
  std::vector<Vortex> vortices;
  std::vector<std::pair<int, int>> indeterminate;  // plaquettes touching an exact zero
  int max_abs_winding = 0;                         // > 1 hints at under-resolution
};

// counter-clockwise in (x, y) axis order
VortexScan plaquette_windings(const ScanGrid& grid);
int boundary_winding(const ScanGrid& grid);

}  // namespace qlm
