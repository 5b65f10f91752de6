#include "msmooth/pde1d.hpp"

#include <algorithm>
#include <cmath>

#include "msmooth/pde2d.hpp"  // minmod3

namespace msmooth {

namespace {

void require_1d(const Field& u) {
  if (u.rank() != 1) throw ConfigError("operation expects a 1D field");
}

inline double fwd(const MirrorView& u, int i, double h) {
  return (u(i + 1) - u(i)) / h;
}

int cycle_count(double stop_time, double tau) {
  return std::max(1, static_cast<int>(std::ceil(stop_time / tau - 1e-9)));
}

}  // namespace

Field linear_step_1d(const Field& u, double p, double tau, bool force) {
  require_1d(u);
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
  if (p == 1.0) return u;

  const double h = u.spacing();
  const double bound = h * h / (2.0 * std::abs(p - 1.0));
  if (!force && tau > bound * (1.0 + 1e-12))
    throw NumericError("1D diffusion step exceeds the stability limit");

  const int nx = u.extent(0);
  Field out(nx, h);
  MirrorView v(u);
  const double coef = tau * (p - 1.0);
  if (p > 1.0) {
    const double h2 = h * h;
    for (int i = 0; i < nx; ++i) {
      const double c = v(i);
      out(i) = c + coef * ((v(i + 1) - c) + (v(i - 1) - c)) / h2;
    }
  } else {
    for (int i = 0; i < nx; ++i) {
      const double m1 =
          minmod3(fwd(v, i + 1, h), fwd(v, i, h), fwd(v, i - 1, h));
      const double m2 =
          minmod3(fwd(v, i, h), fwd(v, i - 1, h), fwd(v, i - 2, h));
      out(i) = v(i) + coef * (m1 - m2) / h;
    }
  }
  return out;
}

Field shock_step_1d(const Field& u, const Shock1DParams& s) {
  require_1d(u);
  const double h = u.spacing();
  const double tau = s.tau > 0.0 ? s.tau : 0.9 * h;
  if (!s.force_tau && tau > h * (1.0 + 1e-12))
    throw NumericError("shock step exceeds the upwind limit tau <= h");

  double theta2 = s.theta2;
  if (theta2 < 0.0) theta2 = 1e-12 * (u.max() - u.min());

  const int nx = u.extent(0);
  Field out(nx, h);
  MirrorView v(u);
  for (int i = 0; i < nx; ++i) {
    const double c = v(i);
    const double dm = v(i - 1) - c;
    const double dp = v(i + 1) - c;
    const double d2 = (dp + dm) / (h * h);
    if (std::abs(d2) <= theta2) {
      out(i) = c;
    } else if (d2 < 0.0) {
      // concave: dilation, value moves toward the local maximum
      const double g = std::max(std::max(dm, dp), 0.0) / h;
      out(i) = c + tau * g;
    } else {
      // convex: erosion, value moves toward the local minimum
      const double g = std::max(std::max(-dm, -dp), 0.0) / h;
      out(i) = c - tau * g;
    }
  }
  return out;
}

Field evolve_linear_1d(const Field& u0, double p, double tau, double stop_time,
                       bool force) {
  require_1d(u0);
  if (stop_time < 0.0) throw ConfigError("stop time must be nonnegative");
  if (tau <= 0.0) {
    const double h = u0.spacing();
    tau = p == 1.0 ? 0.9 * h
                   : 0.9 * h * h / (2.0 * std::abs(p - 1.0));
  }
  Field u = u0;
  if (stop_time == 0.0 || p == 1.0) return u;
  const int cycles = cycle_count(stop_time, tau);
  for (int k = 0; k < cycles; ++k) {
    const double step = k + 1 == cycles ? stop_time - k * tau : tau;
    u = linear_step_1d(u, p, step, force);
  }
  return u;
}

Field evolve_shock_1d(const Field& u0, Shock1DParams s) {
  require_1d(u0);
  if (s.stop_time < 0.0) throw ConfigError("stop time must be nonnegative");
  if (s.tau <= 0.0) s.tau = 0.9 * u0.spacing();
  if (s.theta2 < 0.0) s.theta2 = 1e-12 * (u0.max() - u0.min());
  Field u = u0;
  if (s.stop_time == 0.0) return u;
  const int cycles = cycle_count(s.stop_time, s.tau);
  Shock1DParams step = s;
  for (int k = 0; k < cycles; ++k) {
    step.tau = k + 1 == cycles ? s.stop_time - k * s.tau : s.tau;
    u = shock_step_1d(u, step);
  }
  return u;
}

}  // namespace msmooth
