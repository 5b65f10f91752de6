#pragma once

#include <array>
#include <vector>

#include "msmooth/density.hpp"
#include "msmooth/field.hpp"

namespace msmooth {

enum class WindowShape { Interval, Disc, Ball };

/// Local selection window: all grid points whose Euclidean distance to the
/// center is at most radius (length units; pixel centers decide membership).
struct WindowSpec {
  WindowShape shape = WindowShape::Disc;
  double radius = 1.0;
};

inline int window_rank(WindowShape s) {
  switch (s) {
    case WindowShape::Interval: return 1;
    case WindowShape::Disc: return 2;
    default: return 3;
  }
}

/// Integer offsets of the lattice points inside the window. Always
/// contains the zero offset; a radius below the grid spacing degenerates
/// to the center alone.
std::vector<std::array<int, 3>> window_offsets(const WindowSpec& w, double h);

/// Window samples around center, read through mirrored boundary access.
std::vector<double> collect_window(const Field& f, std::array<int, 3> center,
                                   const WindowSpec& w);

enum class SmootherKind { OrderP, Mode };

struct SmootherConfig {
  WindowSpec window;
  SmootherKind kind = SmootherKind::Mode;
  double p = 1.0;  // used by OrderP
  int bins = 0;    // 0: default_bin_count(#samples)
};

/// One M-smoothing sweep: every sample is replaced by the order-p mean or
/// the mode of its window's histogram density. Results are clamped to the
/// window's sample range (the filter value lies in the convex hull of the
/// window values; the clamp removes sub-bin histogram overshoot).
Field msmooth_step(const Field& f, const SmootherConfig& cfg);

/// cfg applied iters times.
Field msmooth_iterate(const Field& f, const SmootherConfig& cfg, int iters);

}  // namespace msmooth
