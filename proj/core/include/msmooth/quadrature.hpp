#pragma once

#include <cmath>
#include <vector>

#include "msmooth/errors.hpp"

namespace msmooth {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached rule of order n (nodes computed by Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

template <typename F>
double gl_integrate(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (size_t k = 0; k < rule.x.size(); ++k)
    s += rule.w[k] * f(mid + half * rule.x[k]);
  return s * half;
}

/// integral of g(y) * y^p over [0, L] for p > -1, g smooth.
///
/// A quadratic model of g handles [0, w0] (w0 = L * 2^-20) against the
/// exact moments of y^p; the rest is integrated in v = log y, where the
/// integrand e^((p+1)v) g(e^v) is glassy smooth, with n-point
/// Gauss-Legendre per unit-length segment.
template <typename F>
double integrate_tail_zero(F&& g, double L, double p, int n) {
  if (!(L > 0.0)) return 0.0;
  const double w0 = L * 0x1p-20;
  const double g0 = g(0.0);
  const double gm = g(0.5 * w0);
  const double g1 = g(w0);
  const double c1 = (4.0 * gm - 3.0 * g0 - g1) / w0;
  const double c2 = 2.0 * (g1 - 2.0 * gm + g0) / (w0 * w0);
  double total = std::pow(w0, p + 1.0) *
                 (g0 / (p + 1.0) + c1 * w0 / (p + 2.0) +
                  c2 * w0 * w0 / (p + 3.0));

  const double v0 = std::log(w0);
  const double v1 = std::log(L);
  const int segs = std::max(1, static_cast<int>(std::ceil(v1 - v0)));
  auto fv = [&](double v) {
    const double y = std::exp(v);
    return std::exp((p + 1.0) * v) * g(y);
  };
  for (int s = 0; s < segs; ++s) {
    const double va = v0 + (v1 - v0) * s / segs;
    const double vb = v0 + (v1 - v0) * (s + 1) / segs;
    total += gl_integrate(fv, va, vb, n);
  }
  return total;
}

/// integral of f(x) * |x - s|^p over [a, b] for p > -1, f smooth.
/// s may lie inside [a, b], at an endpoint, or outside.
template <typename F>
double integrate_power_weighted(F&& f, double a, double b, double s, double p,
                                int n) {
  if (!(b > a)) return 0.0;
  if (s > a && s < b) {
    auto left = [&](double y) { return f(s - y); };
    auto right = [&](double y) { return f(s + y); };
    return integrate_tail_zero(left, s - a, p, n) +
           integrate_tail_zero(right, b - s, p, n);
  }
  if (s == a) {
    auto right = [&](double y) { return f(s + y); };
    return integrate_tail_zero(right, b - a, p, n);
  }
  if (s == b) {
    auto left = [&](double y) { return f(s - y); };
    return integrate_tail_zero(left, b - a, p, n);
  }
  // Singularity outside: integrate in v = log|x - s|, which grades the
  // nodes toward the near end.
  const bool below = s < a;
  const double ya = below ? a - s : s - b;
  const double yb = below ? b - s : s - a;
  if (ya >= yb - ya) {  // far enough away to be plain smooth
    auto fx = [&](double x) { return f(x) * std::pow(std::abs(x - s), p); };
    return gl_integrate(fx, a, 0.5 * (a + b), n) +
           gl_integrate(fx, 0.5 * (a + b), b, n);
  }
  auto fv = [&](double v) {
    const double y = std::exp(v);
    const double x = below ? s + y : s - y;
    return std::exp((p + 1.0) * v) * f(x);
  };
  const double v0 = std::log(ya);
  const double v1 = std::log(yb);
  const int segs = std::max(1, static_cast<int>(std::ceil(v1 - v0)));
  double total = 0.0;
  for (int k = 0; k < segs; ++k) {
    const double va = v0 + (v1 - v0) * k / segs;
    const double vb = v0 + (v1 - v0) * (k + 1) / segs;
    total += gl_integrate(fv, va, vb, n);
  }
  return total;
}

/// Node-clustering map for composite panels whose endpoints carry Hoelder
/// kinks: z in [0,1] -> [0,1] with three vanishing derivatives at both
/// ends (regularised incomplete beta I_z(4,4)).
inline double beta_cluster(double z) {
  return z * z * z * z * (35.0 - 84.0 * z + 70.0 * z * z - 20.0 * z * z * z);
}
inline double beta_cluster_deriv(double z) {
  const double zz = z * (1.0 - z);
  return 140.0 * zz * zz * zz;
}

/// integral of f over [a, b] with both-end node clustering; safe for
/// integrands with mild endpoint kinks (exponent > 1/4).
template <typename F>
double integrate_clustered(F&& f, double a, double b, int n) {
  const double len = b - a;
  auto fz = [&](double z) {
    return f(a + len * beta_cluster(z)) * len * beta_cluster_deriv(z);
  };
  return gl_integrate(fz, 0.0, 1.0, n);
}

}  // namespace msmooth
