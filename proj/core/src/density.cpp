#include "msmooth/density.hpp"

#include <algorithm>
#include <cmath>

#include "msmooth/optimize.hpp"

namespace msmooth {

double Density1D::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

void Density1D::validate() const {
  if (edges.size() != masses.size() + 1)
    throw ConfigError("density edge/mass sizes inconsistent");
  for (size_t k = 0; k + 1 < edges.size(); ++k)
    if (!(edges[k] < edges[k + 1]))
      throw ConfigError("density edges must be strictly increasing");
  double s = 0.0;
  for (double m : masses) {
    if (m < 0.0) throw ConfigError("density masses must be nonnegative");
    s += m;
  }
  if (!(s > 0.0)) throw ConfigError("density must carry positive mass");
}

Density1D Density1D::shifted(double c) const {
  Density1D out = *this;
  for (double& e : out.edges) e += c;
  return out;
}

int default_bin_count(size_t n) {
  const int b = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::clamp(b, 16, 256);
}

Density1D estimate_density(std::span<const double> samples, int bins) {
  if (samples.empty()) throw ConfigError("estimate_density needs samples");
  if (bins < 1) throw ConfigError("bin count must be positive");

  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  Density1D d;
  if (hi == lo) {
    const double w = std::max(1.0, std::abs(lo)) * 1e-12;
    d.edges = {lo - 0.5 * w, lo + 0.5 * w};
    d.masses = {static_cast<double>(samples.size())};
    return d;
  }
  if (bins == 1) {
    d.edges = {lo, hi};
    d.masses = {static_cast<double>(samples.size())};
    return d;
  }

  const double w = (hi - lo) / (bins - 1);
  const double origin = lo - 0.5 * w;
  d.edges.resize(bins + 1);
  for (int k = 0; k <= bins; ++k) d.edges[k] = origin + k * w;
  d.masses.assign(bins, 0.0);
  for (double x : samples) {
    int k = static_cast<int>((x - origin) / w);
    k = std::clamp(k, 0, bins - 1);
    d.masses[k] += 1.0;
  }
  return d;
}

namespace {

// Antiderivative of |s|^p: sgn(s)|s|^(p+1)/(p+1), finite for p > -1.
inline double power_antideriv(double s, double p) {
  const double a = std::abs(s);
  const double v = std::pow(a, p + 1.0) / (p + 1.0);
  return s < 0.0 ? -v : v;
}

}  // namespace

double pmean(const Density1D& d, double p) {
  if (p <= -1.0 || p == 0.0)
    throw ConfigError("order-p mean requires p > -1 and p != 0");
  d.validate();

  const int n = d.bin_count();
  const double sgn = p > 0.0 ? 1.0 : -1.0;
  auto energy = [&](double mu) {
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = d.edges[k];
      const double b = d.edges[k + 1];
      const double height = d.masses[k] / (b - a);
      e += height * (power_antideriv(b - mu, p) - power_antideriv(a - mu, p));
    }
    return sgn * e;
  };

  const double lo = d.support_lo();
  const double hi = d.support_hi();
  return scan_golden_min(energy, lo, hi, 257, 1e-10 * (hi - lo));
}

double mode(const Density1D& d) {
  d.validate();
  const double midpoint = 0.5 * (d.support_lo() + d.support_hi());
  int best = 0;
  for (int k = 1; k < d.bin_count(); ++k) {
    if (d.masses[k] > d.masses[best]) {
      best = k;
    } else if (d.masses[k] == d.masses[best]) {
      const double ck = d.bin_center(k);
      const double cb = d.bin_center(best);
      const double dk = std::abs(ck - midpoint);
      const double db = std::abs(cb - midpoint);
      if (dk < db || (dk == db && ck < cb)) best = k;
    }
  }
  return d.bin_center(best);
}

}  // namespace msmooth
