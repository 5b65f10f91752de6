#pragma once

#include <functional>
#include <limits>

#include "msmooth/field.hpp"

namespace msmooth {

/// Coefficients of the gauge-coordinate evolution u_t = a u_xixi + b u_etaeta.
/// The order-p family is (a,b) = (1, p-1); the midrange flow (p -> inf,
/// time-rescaled) is (0,1). Internally the solver works with the
/// equivalent split u_t = (a-b) curv(u)|grad u| + b Laplace(u), with the
/// Laplacian realised as stabilised backward diffusion when b < 0.
struct GaugeCoeffs {
  double a = 1.0;
  double b = 1.0;
};

inline GaugeCoeffs order_p_coeffs(double p) { return {1.0, p - 1.0}; }
inline GaugeCoeffs midrange_coeffs() { return {0.0, 1.0}; }

/// Per-fractional-step stability limits; infinite entries mark vanishing
/// operators (their fractional step is a no-op).
struct StepBudget {
  double tau1 = std::numeric_limits<double>::infinity();
  double tau2 = std::numeric_limits<double>::infinity();
  double tau3 = std::numeric_limits<double>::infinity();
  double tau4 = std::numeric_limits<double>::infinity();

  double effective() const {
    return std::min(std::min(tau1, tau2), std::min(tau3, tau4));
  }
};

StepBudget stability_limit(const GaugeCoeffs& c, double nu, double h);
StepBudget stability_limit(double p, double nu, double h);

constexpr double kDiagonalWeight = 0.41421356237309515;  // sqrt(2) - 1

struct EvolutionParams {
  double p = 2.0;
  double nu = kDiagonalWeight;
  double tau = 0.0;        // <= 0: auto step 0.9 * stability limit
  double stop_time = 0.0;  // T
  double epsilon = 1e-10;
  double curvature_cap = 0.0;  // <= 0: 2/h
  bool force_tau = false;      // run past the stability bound anyway
};

/// Argument of minimal modulus if all pairwise products with the first are
/// nonnegative, else 0. Equal-modulus ties resolve to the earlier argument.
double minmod3(double a, double b, double c);

/// Nine-point Laplacian: (1-nu) * axial five-point stencil blended with
/// nu * diagonal five-point stencil; weights sum to zero.
Field laplacian_blend(const Field& u, double nu);

/// Minmod flux-difference approximation of sgn(|grad u|) * Laplace(u),
/// axial and diagonal parts weighted (1-nu) and nu. Vanishes at discrete
/// extrema, which freezes backward diffusion there.
Field backward_laplacian_minmod(const Field& u, double nu);

/// Central-difference isophote curvature with eps added to ux^2+uy^2 in
/// the denominator, clamped to [-cap, cap].
Field curvature(const Field& u, double eps, double cap);

enum class UpwindSense { Dilation, Erosion };

/// Blended axial/diagonal upwind gradient magnitude (Rouy-Tourin).
Field upwind_gradmag(const Field& u, double nu, UpwindSense sense);

enum class StencilPart { Axial, Diagonal };

/// One diffusion fractional step: u + tau * w * b * L(u) with w = (1-nu)
/// or nu by part, L the matching Laplacian sub-stencil for b > 0 and the
/// matching minmod part for b < 0. Refuses steps beyond the part's
/// stability limit unless forced.
Field diffusion_half_step(const Field& u, const GaugeCoeffs& c, double tau,
                          StencilPart part, double nu, bool force = false);
Field diffusion_half_step(const Field& u, double p, double tau,
                          StencilPart part, double nu, bool force = false);

/// One curvature-motion fractional step: u + tau * w * (a-b) * curv * |grad u|
/// with the upwind sense chosen per pixel by the sign of (a-b)*curv
/// (dilation for nonnegative, erosion otherwise).
Field mcm_half_step(const Field& u, const GaugeCoeffs& c, double tau,
                    StencilPart part, double nu, double eps, double cap,
                    bool force = false);
Field mcm_half_step(const Field& u, double p, double tau, StencilPart part,
                    double nu, double eps, double cap, bool force = false);

/// Called after every completed splitting cycle with the current time.
using StepObserver = std::function<void(const Field&, double)>;

/// Runs ceil(T/tau) four-step splitting cycles (diffusion axial, diffusion
/// diagonal, curvature axial, curvature diagonal), truncating the last
/// step to land exactly on T. Obeys the discrete maximum-minimum
/// principle whenever tau respects the stability budget.
Field evolve(const Field& u0, const GaugeCoeffs& c, const EvolutionParams& prm,
             const StepObserver& tap = {});
Field evolve(const Field& u0, const EvolutionParams& prm,
             const StepObserver& tap = {});

}  // namespace msmooth
