#include "msmooth/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace msmooth {

double Field::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double Field::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double Field::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

bool Field::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double mirror_get(const Field& f, std::array<int, 3> index) {
  switch (f.rank()) {
    case 1:
      return f.mirror(index[0]);
    case 2:
      return f.mirror(index[0], index[1]);
    default:
      return f.mirror(index[0], index[1], index[2]);
  }
}

Field forward_diff(const Field& f, DiffDirection dir) {
  if (f.rank() != 2)
    throw ConfigError("forward_diff expects a 2D field");
  const int nx = f.extent(0);
  const int ny = f.extent(1);
  const double h = f.spacing();
  const double hd = std::numbers::sqrt2 * h;
  MirrorView u(f);
  Field out(nx, ny, h);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double d;
      switch (dir) {
        case DiffDirection::X:
          d = (u(i + 1, j) - u(i, j)) / h;
          break;
        case DiffDirection::Y:
          d = (u(i, j + 1) - u(i, j)) / h;
          break;
        case DiffDirection::D:
          d = (u(i + 1, j + 1) - u(i, j)) / hd;
          break;
        default:
          d = (u(i + 1, j - 1) - u(i, j)) / hd;
          break;
      }
      out(i, j) = d;
    }
  }
  return out;
}

CentralDerivs central_derivs(const Field& f, int i, int j) {
  if (f.rank() != 2)
    throw ConfigError("central_derivs expects a 2D field");
  MirrorView u(f);
  const double h = f.spacing();
  const double h2 = h * h;
  CentralDerivs d;
  d.ux = (u(i + 1, j) - u(i - 1, j)) / (2.0 * h);
  d.uy = (u(i, j + 1) - u(i, j - 1)) / (2.0 * h);
  d.uxx = ((u(i + 1, j) - u(i, j)) + (u(i - 1, j) - u(i, j))) / h2;
  d.uyy = ((u(i, j + 1) - u(i, j)) + (u(i, j - 1) - u(i, j))) / h2;
  d.uxy = ((u(i + 1, j + 1) - u(i + 1, j - 1)) -
           (u(i - 1, j + 1) - u(i - 1, j - 1))) /
          (4.0 * h2);
  return d;
}

}  // namespace msmooth
