#pragma once

#include "msmooth/field.hpp"

namespace msmooth {

struct Shock1DParams {
  double tau = 0.0;         // <= 0: auto 0.9 * h
  double stop_time = 0.0;   // T
  double theta2 = -1.0;     // sgn(u_xx) dead zone; < 0: 1e-12 * input range
  bool force_tau = false;
};

/// Explicit step of u_t = (p-1) u_xx. For p > 1 the plain second
/// difference (stable for tau <= h^2/(2(p-1))); for p < 1 the 1D minmod
/// flux form, which freezes the backward diffusion at extrema; p = 1 is
/// the identity.
Field linear_step_1d(const Field& u, double p, double tau, bool force = false);

/// Explicit upwind step of the shock filter u_t = -sgn(u_xx) |u_x|.
/// sgn uses the central second difference with dead zone theta2; |u_x| is
/// the 1D Rouy-Tourin value matching the transport direction (dilation
/// when sgn < 0, erosion when sgn > 0). Stable for tau <= h.
Field shock_step_1d(const Field& u, const Shock1DParams& s);

Field evolve_linear_1d(const Field& u0, double p, double tau, double stop_time,
                       bool force = false);
Field evolve_shock_1d(const Field& u0, Shock1DParams s);

}  // namespace msmooth
