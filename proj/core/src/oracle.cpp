#include "msmooth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "msmooth/optimize.hpp"
#include "msmooth/quadrature.hpp"

namespace msmooth {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------
// Chord machinery. Restricted to a line parallel to the gradient axis,
// every jet is a cubic in x; the energy integrand |u - mu|^p then factors
// exactly as |x - s|^p |Q(x)|^p around a root s of the cubic, which is
// what the weighted quadrature helpers need.
// ---------------------------------------------------------------------

struct Cubic {
  double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;
  double eval(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
  double deriv(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }
};

Cubic chord_cubic(const Jet1D& jet, double mu) {
  return {jet.alpha * jet.eps, jet.alpha * jet.beta, jet.alpha, -mu};
}

Cubic chord_cubic(const Jet2D& jet, double y, double mu) {
  Cubic g;
  g.c3 = jet.alpha * jet.eps[0];
  g.c2 = jet.alpha * (jet.beta + jet.eps[1] * y);
  g.c1 = jet.alpha * (1.0 + jet.gamma * y + jet.eps[2] * y * y);
  g.c0 = jet.alpha * (jet.delta * y * y + jet.eps[3] * y * y * y) - mu;
  return g;
}

Cubic chord_cubic(const Jet3D& jet, double y, double z, double mu) {
  Cubic g;
  const auto& e = jet.eps;
  g.c3 = jet.alpha * e[0];
  g.c2 = jet.alpha * (jet.beta + e[1] * y + e[2] * z);
  g.c1 = jet.alpha * (1.0 + jet.gamma0 * y + jet.gamma1 * z + e[3] * y * y +
                      e[4] * y * z + e[5] * z * z);
  g.c0 = jet.alpha * (jet.delta0 * y * y + jet.delta1 * y * z +
                      jet.delta2 * z * z + e[6] * y * y * y + e[7] * y * y * z +
                      e[8] * y * z * z + e[9] * z * z * z) -
         mu;
  return g;
}

double bisect_root(const Cubic& g, double a, double b) {
  double fa = g.eval(a);
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double fm = g.eval(mid);
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Newton search for a root just outside [a,b]; NaN when none nearby.
double outside_root(const Cubic& g, double a, double b) {
  const double width = b - a;
  double x = std::abs(g.eval(a)) <= std::abs(g.eval(b)) ? a : b;
  for (int i = 0; i < 60; ++i) {
    const double f = g.eval(x);
    const double d = g.deriv(x);
    if (d == 0.0) return kNaN;
    const double step = f / d;
    x -= step;
    if (!std::isfinite(x) || x < a - 5.0 * width || x > b + 5.0 * width)
      return kNaN;
    if (std::abs(step) < 1e-15 * (std::abs(x) + width)) return x;
  }
  return kNaN;
}

// integral over [xl, xr] of |g(x)|^p.
double chord_power_integral(const Cubic& g, double xl, double xr, double p,
                            int m) {
  if (!(xr > xl)) return 0.0;
  const double gl = g.eval(xl);
  const double gr = g.eval(xr);
  double s;
  if (gl == 0.0)
    s = xl;
  else if (gr == 0.0)
    s = xr;
  else if ((gl < 0.0) != (gr < 0.0))
    s = bisect_root(g, xl, xr);
  else
    s = outside_root(g, xl, xr);

  if (std::isfinite(s)) {
    const double q2 = g.c3;
    const double q1 = g.c2 + g.c3 * s;
    const double q0 = g.c1 + s * (g.c2 + g.c3 * s);
    auto f = [&](double x) {
      return std::pow(std::abs((q2 * x + q1) * x + q0), p);
    };
    return integrate_power_weighted(f, xl, xr, s, p, m);
  }
  auto f = [&](double x) { return std::pow(std::abs(g.eval(x)), p); };
  const double mid = 0.5 * (xl + xr);
  return gl_integrate(f, xl, mid, m) + gl_integrate(f, mid, xr, m);
}

template <typename F>
void append_roots(F&& f, double a, double b, int samples,
                  std::vector<double>& out) {
  double x0 = a;
  double f0 = f(a);
  for (int k = 1; k <= samples; ++k) {
    const double x1 = a + (b - a) * k / samples;
    const double f1 = f(x1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int i = 0; i < 90; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
}

std::vector<double> segment_cuts(std::vector<double> interior, double a,
                                 double b) {
  interior.push_back(a);
  interior.push_back(b);
  std::sort(interior.begin(), interior.end());
  return interior;
}

// ---------------------------------------------------------------------
// Window energies E(mu) = integral over the window of |u - mu|^p.
// The outer integration runs over the coordinate transverse to the
// gradient, split where the level set u = mu leaves through the window
// boundary (the inner chord integral has a Hoelder kink there); segment
// panels use the both-end clustering map.
// ---------------------------------------------------------------------

double interval_energy(const Jet1D& jet, double rho, double p, double mu,
                       int m) {
  return chord_power_integral(chord_cubic(jet, mu), -rho, rho, p, m);
}

double disc_energy(const Jet2D& jet, double rho, double p, double mu, int n,
                   int m) {
  auto hi_end = [&](double t) {
    return jet.value(rho * std::cos(t), rho * std::sin(t)) - mu;
  };
  auto lo_end = [&](double t) {
    return jet.value(-rho * std::cos(t), rho * std::sin(t)) - mu;
  };
  std::vector<double> cuts;
  append_roots(hi_end, -0.5 * kPi, 0.5 * kPi, 256, cuts);
  append_roots(lo_end, -0.5 * kPi, 0.5 * kPi, 256, cuts);
  cuts = segment_cuts(std::move(cuts), -0.5 * kPi, 0.5 * kPi);

  auto inner = [&](double t) {
    const double y = rho * std::sin(t);
    const double c = rho * std::cos(t);
    const Cubic g = chord_cubic(jet, y, mu);
    return c * chord_power_integral(g, -c, c, p, m);
  };
  double total = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] < 1e-13) continue;
    total += integrate_clustered(inner, cuts[k], cuts[k + 1], n);
  }
  return rho * total;  // dy = rho cos(t) dt
}

double ball_energy(const Jet3D& jet, double rho, double p, double mu, int n,
                   int m) {
  const int nq = std::max(16, n / 4);
  auto meridian = [&](double phi) {
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    auto hi_end = [&](double psi) {
      const double r = rho * std::sin(psi);
      return jet.value(rho * std::cos(psi), r * cphi, r * sphi) - mu;
    };
    auto lo_end = [&](double psi) {
      const double r = rho * std::sin(psi);
      return jet.value(-rho * std::cos(psi), r * cphi, r * sphi) - mu;
    };
    std::vector<double> cuts;
    append_roots(hi_end, 0.0, 0.5 * kPi, 128, cuts);
    append_roots(lo_end, 0.0, 0.5 * kPi, 128, cuts);
    cuts = segment_cuts(std::move(cuts), 0.0, 0.5 * kPi);

    auto inner = [&](double psi) {
      const double r = rho * std::sin(psi);
      const double c = rho * std::cos(psi);
      const Cubic g = chord_cubic(jet, r * cphi, r * sphi, mu);
      return rho * rho * std::sin(psi) * std::cos(psi) *
             chord_power_integral(g, -c, c, p, m);
    };
    double sum = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] - cuts[k] < 1e-13) continue;
      sum += integrate_clustered(inner, cuts[k], cuts[k + 1], nq);
    }
    return sum;
  };
  double total = 0.0;
  for (int panel = 0; panel < 4; ++panel)
    total += gl_integrate(meridian, 0.5 * kPi * panel, 0.5 * kPi * (panel + 1),
                          nq);
  return total;
}

// Value range over the window boundary (the window extremes of a
// gradient-monotone jet sit on the boundary).
std::pair<double, double> window_range(const Jet1D& jet, double rho) {
  auto [lo, hi] = std::minmax(jet.value(-rho), jet.value(rho));
  return {lo, hi};
}

std::pair<double, double> window_range(const Jet2D& jet, double rho) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < 2048; ++k) {
    const double phi = 2.0 * kPi * k / 2048;
    const double v = jet.value(rho * std::cos(phi), rho * std::sin(phi));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

std::pair<double, double> window_range(const Jet3D& jet, double rho) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int a = 0; a < 64; ++a) {
    const double theta = kPi * (a + 0.5) / 64;
    for (int b = 0; b < 128; ++b) {
      const double phi = 2.0 * kPi * b / 128;
      const double v =
          jet.value(rho * std::cos(theta), rho * std::sin(theta) * std::cos(phi),
                    rho * std::sin(theta) * std::sin(phi));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

void check_order(double p) {
  if (p <= -1.0 || p == 0.0)
    throw ConfigError("order-p mean requires p > -1 and p != 0");
}

// scan + golden minimisation of sgn(p) E(mu), node doubling until two
// successive energies at the minimiser agree.
template <typename Energy>
double minimise_window_energy(Energy&& energy, double lo, double hi, double p,
                              const QuadratureOptions& opt) {
  const double sgn = p > 0.0 ? 1.0 : -1.0;
  for (int n = opt.base_nodes; n <= opt.max_nodes; n *= 2) {
    const int m = std::max(16, n / 4);
    auto objective = [&](double mu) { return sgn * energy(mu, n, m); };
    const double mu =
        scan_golden_min(objective, lo, hi, 257, 1e-10 * (hi - lo));
    const double e1 = energy(mu, n, m);
    const double e2 = energy(mu, 2 * n, std::max(16, n / 2));
    if (std::abs(e1 - e2) <=
        opt.agree_tol * std::max(std::abs(e1), std::abs(e2)))
      return mu;
  }
  throw NumericError("window quadrature did not converge to the agreement tolerance");
}

void check_monotone_2d(const Jet2D& jet, double rho) {
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) {
      const double r = rho * (a + 1) / 24.0;
      const double phi = 2.0 * kPi * b / 24;
      const double x = r * std::cos(phi);
      const double y = r * std::sin(phi);
      const double ux =
          jet.alpha * (1.0 + 2.0 * jet.beta * x + jet.gamma * y +
                       3.0 * jet.eps[0] * x * x + 2.0 * jet.eps[1] * x * y +
                       jet.eps[2] * y * y);
      if (!(ux > 0.0))
        throw ConfigError("jet is not gradient-monotone over the window");
    }
}

}  // namespace

double window_pmean_quadrature(const Jet1D& jet, double rho, double p,
                               const QuadratureOptions& opt) {
  check_order(p);
  if (!(jet.slope(-rho) > 0.0) || !(jet.slope(rho) > 0.0))
    throw ConfigError("jet is not monotone over the window");
  auto [lo, hi] = window_range(jet, rho);
  auto energy = [&](double mu, int /*n*/, int m) {
    return interval_energy(jet, rho, p, mu, m);
  };
  return minimise_window_energy(energy, lo, hi, p, opt);
}

double window_pmean_quadrature(const Jet2D& jet, double rho, double p,
                               const QuadratureOptions& opt) {
  check_order(p);
  check_monotone_2d(jet, rho);
  auto [lo, hi] = window_range(jet, rho);
  auto energy = [&](double mu, int n, int m) {
    return disc_energy(jet, rho, p, mu, n, m);
  };
  return minimise_window_energy(energy, lo, hi, p, opt);
}

double window_pmean_quadrature(const Jet3D& jet, double rho, double p,
                               const QuadratureOptions& opt) {
  check_order(p);
  auto [lo, hi] = window_range(jet, rho);
  auto energy = [&](double mu, int n, int m) {
    return ball_energy(jet, rho, p, mu, n, m);
  };
  return minimise_window_energy(energy, lo, hi, p, opt);
}

// ---------------------------------------------------------------------
// Mode oracles: maximise the value density V(v). Along each transverse
// line the density contribution is 1/u_x at the level-set crossing, so
// V is assembled from the same chord geometry as the energies.
// ---------------------------------------------------------------------

namespace {

double disc_value_density(const Jet2D& jet, double rho, double v, int n) {
  auto hi_end = [&](double t) {
    return jet.value(rho * std::cos(t), rho * std::sin(t)) - v;
  };
  auto lo_end = [&](double t) {
    return jet.value(-rho * std::cos(t), rho * std::sin(t)) - v;
  };
  std::vector<double> cuts;
  append_roots(hi_end, -0.5 * kPi, 0.5 * kPi, 256, cuts);
  append_roots(lo_end, -0.5 * kPi, 0.5 * kPi, 256, cuts);
  cuts = segment_cuts(std::move(cuts), -0.5 * kPi, 0.5 * kPi);

  auto inner = [&](double t) {
    const double y = rho * std::sin(t);
    const double c = rho * std::cos(t);
    const Cubic g = chord_cubic(jet, y, v);
    const double gl = g.eval(-c);
    const double gr = g.eval(c);
    if (!(gl < 0.0 && 0.0 < gr)) return 0.0;
    const double s = bisect_root(g, -c, c);
    return c / g.deriv(s);
  };
  double total = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] < 1e-13) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    if (inner(mid) == 0.0) continue;
    total += integrate_clustered(inner, cuts[k], cuts[k + 1], n);
  }
  return rho * total;
}

double ball_value_density(const Jet3D& jet, double rho, double v, int n) {
  const int nq = std::max(16, n / 4);
  auto meridian = [&](double phi) {
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    auto hi_end = [&](double psi) {
      const double r = rho * std::sin(psi);
      return jet.value(rho * std::cos(psi), r * cphi, r * sphi) - v;
    };
    auto lo_end = [&](double psi) {
      const double r = rho * std::sin(psi);
      return jet.value(-rho * std::cos(psi), r * cphi, r * sphi) - v;
    };
    std::vector<double> cuts;
    append_roots(hi_end, 0.0, 0.5 * kPi, 128, cuts);
    append_roots(lo_end, 0.0, 0.5 * kPi, 128, cuts);
    cuts = segment_cuts(std::move(cuts), 0.0, 0.5 * kPi);

    auto inner = [&](double psi) {
      const double r = rho * std::sin(psi);
      const double c = rho * std::cos(psi);
      const Cubic g = chord_cubic(jet, r * cphi, r * sphi, v);
      const double gl = g.eval(-c);
      const double gr = g.eval(c);
      if (!(gl < 0.0 && 0.0 < gr)) return 0.0;
      const double s = bisect_root(g, -c, c);
      return rho * rho * std::sin(psi) * std::cos(psi) / g.deriv(s);
    };
    double sum = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] - cuts[k] < 1e-13) continue;
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      if (inner(mid) == 0.0) continue;
      sum += integrate_clustered(inner, cuts[k], cuts[k + 1], nq);
    }
    return sum;
  };
  double total = 0.0;
  for (int panel = 0; panel < 4; ++panel)
    total += gl_integrate(meridian, 0.5 * kPi * panel, 0.5 * kPi * (panel + 1),
                          nq);
  return total;
}

template <typename Density>
double maximise_density(Density&& density, double lo, double hi,
                        const QuadratureOptions& opt) {
  const double pad = 1e-6 * (hi - lo);
  for (int n = opt.base_nodes; n <= opt.max_nodes; n *= 2) {
    auto objective = [&](double v) { return -density(v, n); };
    const double v = scan_golden_min(objective, lo + pad, hi - pad, 513,
                                     1e-10 * (hi - lo));
    const double d1 = density(v, n);
    const double d2 = density(v, 2 * n);
    if (std::abs(d1 - d2) <=
        opt.agree_tol * std::max(std::abs(d1), std::abs(d2)))
      return v;
  }
  throw NumericError("mode quadrature did not converge to the agreement tolerance");
}

}  // namespace

double window_mode_quadrature(const Jet1D& jet, double rho,
                              const QuadratureOptions&) {
  // density of values is 1/u'; its maximum sits where the slope is
  // smallest. A boundary winner is returned exactly (endpoint rule).
  const int n = 513;
  int best = 0;
  double smin = std::abs(jet.slope(-rho));
  for (int k = 1; k < n; ++k) {
    const double x = -rho + 2.0 * rho * k / (n - 1);
    const double s = std::abs(jet.slope(x));
    if (s < smin) {
      smin = s;
      best = k;
    }
  }
  if (best == 0) return jet.value(-rho);
  if (best == n - 1) return jet.value(rho);
  auto slope = [&](double x) { return std::abs(jet.slope(x)); };
  const double step = 2.0 * rho / (n - 1);
  const double x = golden_min(slope, -rho + (best - 1) * step,
                              -rho + (best + 1) * step, 1e-12 * rho);
  return jet.value(x);
}

double window_mode_quadrature(const Jet2D& jet, double rho,
                              const QuadratureOptions& opt) {
  check_monotone_2d(jet, rho);
  auto [lo, hi] = window_range(jet, rho);
  auto density = [&](double v, int n) {
    return disc_value_density(jet, rho, v, n);
  };
  return maximise_density(density, lo, hi, opt);
}

double window_mode_quadrature(const Jet3D& jet, double rho,
                              const QuadratureOptions& opt) {
  auto [lo, hi] = window_range(jet, rho);
  auto density = [&](double v, int n) {
    return ball_value_density(jet, rho, v, n);
  };
  return maximise_density(density, lo, hi, opt);
}

// ---------------------------------------------------------------------
// Closed-form limits and consistency reports.
// ---------------------------------------------------------------------

double predicted_kappa(const Jet1D& jet, double p) {
  return (p - 1.0) / (p + 1.0) * jet.beta;
}

double predicted_kappa(const Jet2D& jet, double p) {
  return ((p - 1.0) * jet.beta + jet.delta) / (p + 2.0);
}

double predicted_kappa(const Jet3D& jet, double p) {
  return ((p - 1.0) * jet.beta + jet.delta0 + jet.delta2) / (p + 3.0);
}

double predicted_mode_kappa(const Jet2D& jet) {
  return jet.delta - 2.0 * jet.beta;
}

double predicted_mode_kappa(const Jet3D& jet) {
  return 0.5 * (jet.delta0 + jet.delta2 - 2.0 * jet.beta);
}

double predicted_mode_kappa_1d() { return kNaN; }

namespace {

double fit_order(const std::vector<std::pair<double, double>>& rho_err) {
  // least-squares slope of log(err) against log(rho); near-zero errors
  // (already at the quadrature floor) are excluded
  std::vector<std::pair<double, double>> pts;
  double emax = 0.0;
  for (const auto& [rho, err] : rho_err) emax = std::max(emax, err);
  for (const auto& [rho, err] : rho_err)
    if (err > 1e-9 * emax && err > 0.0)
      pts.push_back({std::log(rho), std::log(err)});
  if (rho_err.size() < 3 || pts.size() < 2) return kNaN;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = pts.size() * sxx - sx * sx;
  if (denom == 0.0) return kNaN;
  return (pts.size() * sxy - sx * sy) / denom;
}

template <typename Jet, typename Obs>
void append_group(std::vector<ConsistencyRecord>& out, int dim, double p,
                  std::span<const double> rhos, const Jet& jet, double pred,
                  Obs&& observe) {
  std::vector<ConsistencyRecord> group;
  std::vector<std::pair<double, double>> rho_err;
  for (double rho : rhos) {
    ConsistencyRecord rec;
    rec.dim = dim;
    rec.p = p;
    rec.rho = rho;
    rec.kappa_obs = observe(jet, rho) / (jet.alpha * rho * rho);
    rec.kappa_pred = pred;
    rec.rel_err = std::abs(rec.kappa_obs - rec.kappa_pred) /
                  std::max(std::abs(rec.kappa_pred), 1e-300);
    rec.fitted_order = kNaN;
    rho_err.push_back({rho, std::abs(rec.kappa_obs - rec.kappa_pred)});
    group.push_back(rec);
  }
  const double order = fit_order(rho_err);
  for (auto& rec : group) {
    rec.fitted_order = order;
    out.push_back(rec);
  }
}

}  // namespace

std::vector<ConsistencyRecord> consistency_report(
    std::span<const double> ps, std::span<const double> rhos,
    std::span<const Jet1D> jets, const QuadratureOptions& opt) {
  std::vector<ConsistencyRecord> out;
  for (double p : ps)
    for (const auto& jet : jets)
      append_group(out, 1, p, rhos, jet, predicted_kappa(jet, p),
                   [&](const Jet1D& j, double rho) {
                     return window_pmean_quadrature(j, rho, p, opt);
                   });
  return out;
}

std::vector<ConsistencyRecord> consistency_report(
    std::span<const double> ps, std::span<const double> rhos,
    std::span<const Jet2D> jets, const QuadratureOptions& opt) {
  std::vector<ConsistencyRecord> out;
  for (double p : ps)
    for (const auto& jet : jets)
      append_group(out, 2, p, rhos, jet, predicted_kappa(jet, p),
                   [&](const Jet2D& j, double rho) {
                     return window_pmean_quadrature(j, rho, p, opt);
                   });
  return out;
}

std::vector<ConsistencyRecord> consistency_report(
    std::span<const double> ps, std::span<const double> rhos,
    std::span<const Jet3D> jets, const QuadratureOptions& opt) {
  std::vector<ConsistencyRecord> out;
  for (double p : ps)
    for (const auto& jet : jets)
      append_group(out, 3, p, rhos, jet, predicted_kappa(jet, p),
                   [&](const Jet3D& j, double rho) {
                     return window_pmean_quadrature(j, rho, p, opt);
                   });
  return out;
}

std::vector<ConsistencyRecord> mode_consistency_report(
    std::span<const double> rhos, std::span<const Jet2D> jets,
    const QuadratureOptions& opt) {
  std::vector<ConsistencyRecord> out;
  for (const auto& jet : jets)
    append_group(out, 2, -1.0, rhos, jet, predicted_mode_kappa(jet),
                 [&](const Jet2D& j, double rho) {
                   return window_mode_quadrature(j, rho, opt);
                 });
  return out;
}

std::vector<ConsistencyRecord> mode_consistency_report(
    std::span<const double> rhos, std::span<const Jet3D> jets,
    const QuadratureOptions& opt) {
  std::vector<ConsistencyRecord> out;
  for (const auto& jet : jets)
    append_group(out, 3, -1.0, rhos, jet, predicted_mode_kappa(jet),
                 [&](const Jet3D& j, double rho) {
                   return window_mode_quadrature(j, rho, opt);
                 });
  return out;
}

void write_consistency_csv(std::ostream& os,
                           std::span<const ConsistencyRecord> records) {
  os << "dim,p,rho,kappa_obs,kappa_pred,rel_err,fitted_order\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%.12g,%.12g,%.6g,%.4g\n",
                  r.dim, r.p, r.rho, r.kappa_obs, r.kappa_pred, r.rel_err,
                  r.fitted_order);
    os << buf;
  }
}

// ---------------------------------------------------------------------
// Cut-off quadratic toy density.
// ---------------------------------------------------------------------

namespace {

// integral of (1 - lambda (z-m)^2) |z-mu|^p over [-1,1], exactly: shift
// to s = z - mu and expand the quadratic against the moments of |s|^p.
double toy_energy(double lambda, double m, double p, double mu) {
  const double A = 1.0 - lambda * (mu - m) * (mu - m);
  const double B = -2.0 * lambda * (mu - m);
  const double C = -lambda;
  auto h0 = [&](double s) {
    const double v = std::pow(std::abs(s), p + 1.0) / (p + 1.0);
    return s < 0.0 ? -v : v;
  };
  auto h1 = [&](double s) { return std::pow(std::abs(s), p + 2.0) / (p + 2.0); };
  auto h2 = [&](double s) {
    const double v = std::pow(std::abs(s), p + 3.0) / (p + 3.0);
    return s < 0.0 ? -v : v;
  };
  const double a = -1.0 - mu;
  const double b = 1.0 - mu;
  return A * (h0(b) - h0(a)) + B * (h1(b) - h1(a)) + C * (h2(b) - h2(a));
}

}  // namespace

double toy_pmean_closed_form(double lambda, double m, double p) {
  return 2.0 * lambda * m / ((p + 1.0) - (p - 1.0) * lambda);
}

double toy_density_pmean(double lambda, double m, double p) {
  check_order(p);
  if (!(lambda > 0.0) || lambda > 1.0 / ((1.0 + m) * (1.0 + m)))
    throw ConfigError("toy density requires 0 < lambda <= (1+m)^-2");
  const double sgn = p > 0.0 ? 1.0 : -1.0;
  auto objective = [&](double mu) { return sgn * toy_energy(lambda, m, p, mu); };
  return scan_golden_min(objective, -1.0, 1.0, 257, 2e-12);
}

std::vector<ToyPmeanRow> toy_pmean_check(double lambda, double m,
                                         std::span<const double> ps) {
  std::vector<ToyPmeanRow> rows;
  for (double p : ps) {
    ToyPmeanRow row;
    row.p = p;
    row.numeric = toy_density_pmean(lambda, m, p);
    row.closed_form = toy_pmean_closed_form(lambda, m, p);
    row.abs_err = std::abs(row.numeric - row.closed_form);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------
// Step-function experiment (rho = 1). The disc integral reduces to a 1D
// integral over the level-value parameter; substituting the boundary
// abscissa x' (level value c = X(x') = x' + delta (1 - x'^2)) makes the
// level-line width an exact sqrt(1 - x'^2). Each branch carries one
// |.|^p singularity, factored exactly through the quadratic X.
// ---------------------------------------------------------------------

namespace {

struct StepGeometry {
  double alpha, delta, jump, p;

  double X(double xp) const { return xp + delta * (1.0 - xp * xp); }
  double Xp(double xp) const { return 1.0 - 2.0 * delta * xp; }

  // X(xp) = c solved by Newton (X is monotone for |delta| <= 0.2)
  double x_of_value(double c) const {
    double x = c;
    for (int i = 0; i < 60; ++i) {
      const double step = (X(x) - c) / Xp(x);
      x -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
  }
};

// sin(d/2)/d, stable near d = 0
inline double half_sinc(double d) {
  return std::abs(d) < 1e-6 ? 0.5 * (1.0 - d * d / 24.0)
                            : std::sin(0.5 * d) / d;
}

// integral over x' in [lo, hi] of sqrt(1-x'^2) X'(x') |alpha X(x') - target|^p
double step_branch_integral(const StepGeometry& geo, double lo, double hi,
                            double target, int n) {
  if (!(hi > lo)) return 0.0;
  const double p = geo.p;
  const double xs = geo.x_of_value(target / geo.alpha);

  if (std::abs(xs) < 1.0) {
    // angle substitution x' = -cos(phi): the sqrt becomes smooth and the
    // singular factor |x'-xs| = 2 sin((phi+phis)/2) |sin((phi-phis)/2)|
    const double phi_lo = std::acos(-lo);
    const double phi_hi = std::acos(-hi);
    const double phis = std::acos(-xs);
    auto f = [&](double phi) {
      const double xp = -std::cos(phi);
      const double sphi = std::sin(phi);
      const double smooth =
          geo.alpha * std::abs(1.0 - geo.delta * (xp + xs)) * 2.0 *
          std::sin(0.5 * (phi + phis)) * half_sinc(phi - phis);
      return sphi * sphi * geo.Xp(xp) * std::pow(smooth, p);
    };
    return integrate_power_weighted(f, phi_lo, phi_hi, phis, p, n);
  }
  // singularity beyond the disc: factor in x'; the helper grades nodes
  // toward the near end, which also resolves the boundary sqrt
  auto f = [&](double xp) {
    const double w = std::sqrt(std::max(0.0, 1.0 - xp * xp)) * geo.Xp(xp);
    return w * std::pow(geo.alpha * std::abs(1.0 - geo.delta * (xp + xs)), p);
  };
  return integrate_power_weighted(f, lo, hi, xs, p, n);
}

// order-p mean of the step function over the unit disc for offset theta
double step_pmean(const StepGeometry& geo, double theta, int n) {
  const double c1 = std::clamp(geo.x_of_value(-theta), -1.0, 1.0);
  auto energy = [&](double mu) {
    const double e1 = step_branch_integral(geo, -1.0, c1, mu, n);
    const double e2 = step_branch_integral(geo, c1, 1.0, mu - geo.jump, n);
    return -(e1 + e2);  // p < 0: sgn(p) E is minimised where E is maximal
  };
  const double span = geo.alpha * (1.0 + std::abs(geo.delta));
  const double lo = -span - 1e-3 * (span + geo.jump);
  const double hi = span + geo.jump + 1e-3 * (span + geo.jump);
  return scan_golden_min(energy, lo, hi, 257, 1e-10 * (hi - lo));
}

}  // namespace

StepExperimentRecord step_experiment(double p, double alpha, double delta,
                                     double jump,
                                     const QuadratureOptions& opt) {
  if (!(p > -1.0) || !(p < 0.0))
    throw ConfigError("step experiment requires -1 < p < 0");
  if (std::abs(delta) > 0.49)
    throw ConfigError("step experiment requires |delta| < 0.49");

  StepGeometry geo{alpha, delta, jump, p};
  const int n = std::max(48, opt.base_nodes / 2);

  StepExperimentRecord rec;
  rec.p = p;
  rec.alpha = alpha;
  rec.delta = delta;
  rec.jump = jump;
  rec.predicted = -1.0 / (p + 2.0);

  double th_lo = -0.6, th_hi = 0.6;
  const double mu_lo = step_pmean(geo, th_lo, n);
  const double mu_hi = step_pmean(geo, th_hi, n);
  const double mid = 0.5 * (mu_lo + mu_hi);
  if (!(mu_lo < mid && mid < mu_hi))
    throw NumericError("step experiment found no branch jump in scan range");

  for (int i = 0; i < 60 && th_hi - th_lo > 1e-12; ++i) {
    const double th = 0.5 * (th_lo + th_hi);
    if (step_pmean(geo, th, n) > mid)
      th_hi = th;
    else
      th_lo = th;
  }
  rec.theta_star = 0.5 * (th_lo + th_hi);
  rec.theta_over_delta = rec.theta_star / delta;
  return rec;
}

void write_step_csv(std::ostream& os,
                    std::span<const StepExperimentRecord> records) {
  os << "p,alpha,delta,h,theta_over_delta,predicted\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.12g,%.12g\n", r.p,
                  r.alpha, r.delta, r.jump, r.theta_over_delta, r.predicted);
    os << buf;
  }
}

}  // namespace msmooth
