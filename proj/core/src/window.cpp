#include "msmooth/window.hpp"

#include <algorithm>
#include <cmath>

#include "msmooth/parallel.hpp"

namespace msmooth {

std::vector<std::array<int, 3>> window_offsets(const WindowSpec& w, double h) {
  if (!(w.radius > 0.0)) throw ConfigError("window radius must be positive");
  const double r = w.radius / h;
  const double r2 = r * r;
  const int m = static_cast<int>(std::floor(r));
  const int rank = window_rank(w.shape);

  std::vector<std::array<int, 3>> offsets;
  const int ylo = rank >= 2 ? -m : 0;
  const int zlo = rank >= 3 ? -m : 0;
  for (int dz = zlo; dz <= -zlo; ++dz)
    for (int dy = ylo; dy <= -ylo; ++dy)
      for (int dx = -m; dx <= m; ++dx)
        if (dx * dx + dy * dy + dz * dz <= r2)
          offsets.push_back({dx, dy, dz});
  return offsets;
}

std::vector<double> collect_window(const Field& f, std::array<int, 3> center,
                                   const WindowSpec& w) {
  if (window_rank(w.shape) != f.rank())
    throw ConfigError("window shape does not match field dimensionality");
  const auto offsets = window_offsets(w, f.spacing());
  std::vector<double> samples;
  samples.reserve(offsets.size());
  for (const auto& o : offsets)
    samples.push_back(
        f.folded(center[0] + o[0], center[1] + o[1], center[2] + o[2]));
  return samples;
}

Field msmooth_step(const Field& f, const SmootherConfig& cfg) {
  if (window_rank(cfg.window.shape) != f.rank())
    throw ConfigError("window shape does not match field dimensionality");
  if (cfg.kind == SmootherKind::OrderP && (cfg.p <= -1.0 || cfg.p == 0.0))
    throw ConfigError("order-p smoother requires p > -1 and p != 0");

  const auto offsets = window_offsets(cfg.window, f.spacing());
  const int nx = f.extent(0);
  const int ny = f.rank() >= 2 ? f.extent(1) : 1;
  const int nz = f.rank() >= 3 ? f.extent(2) : 1;

  Field out = f;
  parallel_for(0, ny * nz, [&](int row) {
    const int j = row % ny;
    const int k = row / ny;
    std::vector<double> samples(offsets.size());
    for (int i = 0; i < nx; ++i) {
      for (size_t s = 0; s < offsets.size(); ++s)
        samples[s] = f.folded(i + offsets[s][0], j + offsets[s][1],
                              k + offsets[s][2]);
      const int bins =
          cfg.bins > 0 ? cfg.bins : default_bin_count(samples.size());
      const Density1D d = estimate_density(samples, bins);
      double v = cfg.kind == SmootherKind::Mode ? mode(d) : pmean(d, cfg.p);
      const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
      v = std::clamp(v, *lo, *hi);
      out.values()[(static_cast<size_t>(k) * ny + j) * nx + i] = v;
    }
  });
  return out;
}

Field msmooth_iterate(const Field& f, const SmootherConfig& cfg, int iters) {
  Field u = f;
  for (int it = 0; it < iters; ++it) u = msmooth_step(u, cfg);
  return u;
}

}  // namespace msmooth
