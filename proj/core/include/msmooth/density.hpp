#pragma once

#include <span>
#include <vector>

#include "msmooth/errors.hpp"

namespace msmooth {

/// Piecewise-constant value density: bin edges (strictly increasing) and
/// nonnegative per-bin masses, edges.size() == masses.size() + 1.
struct Density1D {
  std::vector<double> edges;
  std::vector<double> masses;

  int bin_count() const { return static_cast<int>(masses.size()); }
  double support_lo() const { return edges.front(); }
  double support_hi() const { return edges.back(); }
  double bin_center(int k) const { return 0.5 * (edges[k] + edges[k + 1]); }
  double total_mass() const;
  void validate() const;

  /// Same density with the value axis shifted by c.
  Density1D shifted(double c) const;
};

/// Histogram density of a sample set. The bin grid is laid out so that the
/// extreme samples sit at the centers of the first and last bin: bin width
/// w = (max-min)/(bins-1) and support [min - w/2, max + w/2]. This keeps
/// the mode of a two-valued sample set exactly on one of the two values.
/// All samples equal yields a single bin of tiny positive width centered
/// at the value.
Density1D estimate_density(std::span<const double> samples, int bins);

/// Default bin count for n samples: clamp(ceil(sqrt(n)), 16, 256).
int default_bin_count(size_t n);

/// Order-p mean of a density for p > -1, p != 0: the minimiser of
/// sgn(p) * integral of density(z)*|mu-z|^p dz. Each per-bin integral is
/// evaluated in closed form through the antiderivative of |mu-z|^p, which
/// stays finite for p > -1 even when mu lies inside the bin. The minimiser
/// is located by a 257-point scan over the support followed by
/// golden-section refinement to 1e-10 of the support width.
double pmean(const Density1D& d, double p);

/// Center of the maximal-mass bin. Ties go to the bin whose center is
/// closest to the support midpoint, then to the lower center.
double mode(const Density1D& d);

}  // namespace msmooth
