#include "msmooth/pde2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msmooth/parallel.hpp"

namespace msmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double safe_div(double num, double den) {
  return den > 0.0 ? num / den : kInf;
}

void require_2d(const Field& u) {
  if (u.rank() != 2) throw ConfigError("operation expects a 2D field");
}

void check_step(double tau, double bound, bool force, const char* what) {
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
  if (!force && tau > bound * (1.0 + 1e-12))
    throw NumericError(std::string(what) + " step exceeds the stability limit");
}

// Applies kernel(view, i, j) over all pixels, row-parallel.
template <typename K>
Field map_pixels(const Field& u, K&& kernel) {
  const int nx = u.extent(0);
  const int ny = u.extent(1);
  Field out(nx, ny, u.spacing());
  MirrorView v(u);
  parallel_for(0, ny, [&](int j) {
    for (int i = 0; i < nx; ++i) out(i, j) = kernel(v, i, j);
  });
  return out;
}

inline double axial_laplacian(const MirrorView& u, int i, int j, double h2) {
  const double c = u(i, j);
  return ((u(i + 1, j) - c) + (u(i - 1, j) - c) + (u(i, j + 1) - c) +
          (u(i, j - 1) - c)) /
         h2;
}

inline double diagonal_laplacian(const MirrorView& u, int i, int j,
                                 double h2) {
  const double c = u(i, j);
  return ((u(i + 1, j + 1) - c) + (u(i - 1, j - 1) - c) +
          (u(i + 1, j - 1) - c) + (u(i - 1, j + 1) - c)) /
         (2.0 * h2);
}

// Forward differences; the diagonal ones carry the sqrt(2)h denominator.
inline double fx(const MirrorView& u, int i, int j, double h) {
  return (u(i + 1, j) - u(i, j)) / h;
}
inline double fy(const MirrorView& u, int i, int j, double h) {
  return (u(i, j + 1) - u(i, j)) / h;
}
inline double fd(const MirrorView& u, int i, int j, double hd) {
  return (u(i + 1, j + 1) - u(i, j)) / hd;
}
inline double fe(const MirrorView& u, int i, int j, double hd) {
  return (u(i + 1, j - 1) - u(i, j)) / hd;
}

inline double axial_minmod(const MirrorView& u, int i, int j, double h) {
  const double mx1 =
      minmod3(fx(u, i + 1, j, h), fx(u, i, j, h), fx(u, i - 1, j, h));
  const double mx2 =
      minmod3(fx(u, i, j, h), fx(u, i - 1, j, h), fx(u, i - 2, j, h));
  const double my1 =
      minmod3(fy(u, i, j + 1, h), fy(u, i, j, h), fy(u, i, j - 1, h));
  const double my2 =
      minmod3(fy(u, i, j, h), fy(u, i, j - 1, h), fy(u, i, j - 2, h));
  return ((mx1 - mx2) + (my1 - my2)) / h;
}

inline double diagonal_minmod(const MirrorView& u, int i, int j, double h) {
  const double hd = std::numbers::sqrt2 * h;
  const double md1 = minmod3(fd(u, i + 1, j + 1, hd), fd(u, i, j, hd),
                             fd(u, i - 1, j - 1, hd));
  const double md2 = minmod3(fd(u, i, j, hd), fd(u, i - 1, j - 1, hd),
                             fd(u, i - 2, j - 2, hd));
  const double me1 = minmod3(fe(u, i + 1, j - 1, hd), fe(u, i, j, hd),
                             fe(u, i - 1, j + 1, hd));
  const double me2 = minmod3(fe(u, i, j, hd), fe(u, i - 1, j + 1, hd),
                             fe(u, i - 2, j + 2, hd));
  return ((md1 - md2) + (me1 - me2)) / hd;
}

inline double max3(double a, double b, double c) {
  return std::max(std::max(a, b), c);
}

inline double rt_axial(const MirrorView& u, int i, int j, double h,
                       UpwindSense sense) {
  double gx, gy;
  if (sense == UpwindSense::Dilation) {
    gx = max3(-fx(u, i - 1, j, h), fx(u, i, j, h), 0.0);
    gy = max3(-fy(u, i, j - 1, h), fy(u, i, j, h), 0.0);
  } else {
    gx = max3(-fx(u, i, j, h), fx(u, i - 1, j, h), 0.0);
    gy = max3(-fy(u, i, j, h), fy(u, i, j - 1, h), 0.0);
  }
  return std::sqrt(gx * gx + gy * gy);
}

inline double rt_diagonal(const MirrorView& u, int i, int j, double h,
                          UpwindSense sense) {
  const double hd = std::numbers::sqrt2 * h;
  double gd, ge;
  if (sense == UpwindSense::Dilation) {
    gd = max3(-fd(u, i - 1, j - 1, hd), fd(u, i, j, hd), 0.0);
    ge = max3(-fe(u, i - 1, j + 1, hd), fe(u, i, j, hd), 0.0);
  } else {
    gd = max3(-fd(u, i, j, hd), fd(u, i - 1, j - 1, hd), 0.0);
    ge = max3(-fe(u, i, j, hd), fe(u, i - 1, j + 1, hd), 0.0);
  }
  return std::sqrt(gd * gd + ge * ge);
}

inline double curvature_at(const MirrorView& u, int i, int j, double h,
                           double eps, double cap) {
  const double h2 = h * h;
  const double ux = (u(i + 1, j) - u(i - 1, j)) / (2.0 * h);
  const double uy = (u(i, j + 1) - u(i, j - 1)) / (2.0 * h);
  const double c = u(i, j);
  const double uxx = ((u(i + 1, j) - c) + (u(i - 1, j) - c)) / h2;
  const double uyy = ((u(i, j + 1) - c) + (u(i, j - 1) - c)) / h2;
  const double uxy = ((u(i + 1, j + 1) - u(i + 1, j - 1)) -
                      (u(i - 1, j + 1) - u(i - 1, j - 1))) /
                     (4.0 * h2);
  const double g2 = ux * ux + uy * uy + eps;
  const double k =
      (ux * ux * uyy - 2.0 * ux * uy * uxy + uy * uy * uxx) / std::pow(g2, 1.5);
  return std::clamp(k, -cap, cap);
}

}  // namespace

double minmod3(double a, double b, double c) {
  if (a * b < 0.0 || a * c < 0.0) return 0.0;
  double m = a;
  if (std::abs(b) < std::abs(m)) m = b;
  if (std::abs(c) < std::abs(m)) m = c;
  return m;
}

StepBudget stability_limit(const GaugeCoeffs& c, double nu, double h) {
  if (nu < 0.0 || nu > 1.0) throw ConfigError("nu must lie in [0,1]");
  if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
  const double h2 = h * h;
  const double diff = std::abs(c.b);
  const double mcm = std::abs(c.a - c.b);
  StepBudget s;
  s.tau1 = safe_div(h2, 4.0 * (1.0 - nu) * diff);
  s.tau2 = safe_div(h2, 2.0 * nu * diff);
  s.tau3 = safe_div(h2, 2.0 * std::numbers::sqrt2 * (1.0 - nu) * mcm);
  s.tau4 = safe_div(h2, 2.0 * nu * mcm);
  return s;
}

StepBudget stability_limit(double p, double nu, double h) {
  return stability_limit(order_p_coeffs(p), nu, h);
}

Field laplacian_blend(const Field& u, double nu) {
  require_2d(u);
  const double h2 = u.spacing() * u.spacing();
  return map_pixels(u, [&](const MirrorView& v, int i, int j) {
    return (1.0 - nu) * axial_laplacian(v, i, j, h2) +
           nu * diagonal_laplacian(v, i, j, h2);
  });
}

Field backward_laplacian_minmod(const Field& u, double nu) {
  require_2d(u);
  const double h = u.spacing();
  return map_pixels(u, [&](const MirrorView& v, int i, int j) {
    return (1.0 - nu) * axial_minmod(v, i, j, h) +
           nu * diagonal_minmod(v, i, j, h);
  });
}

Field curvature(const Field& u, double eps, double cap) {
  require_2d(u);
  const double h = u.spacing();
  return map_pixels(u, [&](const MirrorView& v, int i, int j) {
    return curvature_at(v, i, j, h, eps, cap);
  });
}

Field upwind_gradmag(const Field& u, double nu, UpwindSense sense) {
  require_2d(u);
  const double h = u.spacing();
  return map_pixels(u, [&](const MirrorView& v, int i, int j) {
    return (1.0 - nu) * rt_axial(v, i, j, h, sense) +
           nu * rt_diagonal(v, i, j, h, sense);
  });
}

Field diffusion_half_step(const Field& u, const GaugeCoeffs& c, double tau,
                          StencilPart part, double nu, bool force) {
  require_2d(u);
  const double b = c.b;
  const double w = part == StencilPart::Axial ? 1.0 - nu : nu;
  if (b == 0.0 || w == 0.0) return u;

  const StepBudget budget = stability_limit(c, nu, u.spacing());
  const double bound = part == StencilPart::Axial ? budget.tau1 : budget.tau2;
  check_step(tau, bound, force, "diffusion");

  const double h = u.spacing();
  const double h2 = h * h;
  const double coef = tau * w * b;
  if (b > 0.0) {
    return map_pixels(u, [&](const MirrorView& v, int i, int j) {
      const double lap = part == StencilPart::Axial
                             ? axial_laplacian(v, i, j, h2)
                             : diagonal_laplacian(v, i, j, h2);
      return v(i, j) + coef * lap;
    });
  }
  return map_pixels(u, [&](const MirrorView& v, int i, int j) {
    const double mm = part == StencilPart::Axial ? axial_minmod(v, i, j, h)
                                                 : diagonal_minmod(v, i, j, h);
    return v(i, j) + coef * mm;
  });
}

Field diffusion_half_step(const Field& u, double p, double tau,
                          StencilPart part, double nu, bool force) {
  return diffusion_half_step(u, order_p_coeffs(p), tau, part, nu, force);
}

Field mcm_half_step(const Field& u, const GaugeCoeffs& c, double tau,
                    StencilPart part, double nu, double eps, double cap,
                    bool force) {
  require_2d(u);
  const double speed = c.a - c.b;
  const double w = part == StencilPart::Axial ? 1.0 - nu : nu;
  if (speed == 0.0 || w == 0.0) return u;

  const StepBudget budget = stability_limit(c, nu, u.spacing());
  const double bound = part == StencilPart::Axial ? budget.tau3 : budget.tau4;
  check_step(tau, bound, force, "curvature motion");

  const double h = u.spacing();
  if (cap <= 0.0) cap = 2.0 / h;
  const double coef = tau * w;
  return map_pixels(u, [&](const MirrorView& v, int i, int j) {
    const double cva = speed * curvature_at(v, i, j, h, eps, cap);
    const UpwindSense sense =
        cva >= 0.0 ? UpwindSense::Dilation : UpwindSense::Erosion;
    const double g = part == StencilPart::Axial
                         ? rt_axial(v, i, j, h, sense)
                         : rt_diagonal(v, i, j, h, sense);
    return v(i, j) + coef * cva * g;
  });
}

Field mcm_half_step(const Field& u, double p, double tau, StencilPart part,
                    double nu, double eps, double cap, bool force) {
  return mcm_half_step(u, order_p_coeffs(p), tau, part, nu, eps, cap, force);
}

Field evolve(const Field& u0, const GaugeCoeffs& c, const EvolutionParams& prm,
             const StepObserver& tap) {
  require_2d(u0);
  if (prm.stop_time < 0.0) throw ConfigError("stop time must be nonnegative");

  const StepBudget budget = stability_limit(c, prm.nu, u0.spacing());
  const double tau_eff = budget.effective();
  double tau = prm.tau > 0.0 ? prm.tau : 0.9 * tau_eff;
  if (!prm.force_tau && tau > tau_eff * (1.0 + 1e-12))
    throw NumericError("time step exceeds the splitting stability limit");

  Field u = u0;
  if (prm.stop_time == 0.0) return u;

  const int cycles =
      std::max(1, static_cast<int>(std::ceil(prm.stop_time / tau - 1e-9)));
  for (int k = 0; k < cycles; ++k) {
    // last cycle truncated so the evolution lands exactly on T
    const double step =
        k + 1 == cycles ? prm.stop_time - k * tau : tau;
    u = diffusion_half_step(u, c, step, StencilPart::Axial, prm.nu,
                            prm.force_tau);
    u = diffusion_half_step(u, c, step, StencilPart::Diagonal, prm.nu,
                            prm.force_tau);
    u = mcm_half_step(u, c, step, StencilPart::Axial, prm.nu, prm.epsilon,
                      prm.curvature_cap, prm.force_tau);
    u = mcm_half_step(u, c, step, StencilPart::Diagonal, prm.nu, prm.epsilon,
                      prm.curvature_cap, prm.force_tau);
    if (tap) tap(u, k + 1 == cycles ? prm.stop_time : (k + 1) * tau);
  }
  return u;
}

Field evolve(const Field& u0, const EvolutionParams& prm,
             const StepObserver& tap) {
  return evolve(u0, order_p_coeffs(prm.p), prm, tap);
}

}  // namespace msmooth
