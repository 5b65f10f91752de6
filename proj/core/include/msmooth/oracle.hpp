#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "msmooth/errors.hpp"

namespace msmooth {

/// Local Taylor models u = alpha*(x + beta x^2 + ...) used as analytic
/// test images, normalised so alpha is the gradient magnitude at the
/// origin and the gradient points along +x.
struct Jet1D {
  double alpha = 1.0;
  double beta = 0.0;
  double eps = 0.0;  // x^3 coefficient

  double value(double x) const {
    return alpha * (x + beta * x * x + eps * x * x * x);
  }
  double slope(double x) const {
    return alpha * (1.0 + 2.0 * beta * x + 3.0 * eps * x * x);
  }
};

struct Jet2D {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  // third-order terms eps0 x^3 + eps1 x^2 y + eps2 x y^2 + eps3 y^3
  std::array<double, 4> eps{0.0, 0.0, 0.0, 0.0};

  double value(double x, double y) const {
    return alpha *
           (x + beta * x * x + gamma * x * y + delta * y * y +
            eps[0] * x * x * x + eps[1] * x * x * y + eps[2] * x * y * y +
            eps[3] * y * y * y);
  }
};

struct Jet3D {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma0 = 0.0, gamma1 = 0.0;
  double delta0 = 0.0, delta1 = 0.0, delta2 = 0.0;
  // x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3
  std::array<double, 10> eps{};

  double value(double x, double y, double z) const {
    return alpha *
           (x + beta * x * x + gamma0 * x * y + gamma1 * x * z +
            delta0 * y * y + delta1 * y * z + delta2 * z * z +
            eps[0] * x * x * x + eps[1] * x * x * y + eps[2] * x * x * z +
            eps[3] * x * y * y + eps[4] * x * y * z + eps[5] * x * z * z +
            eps[6] * y * y * y + eps[7] * y * y * z + eps[8] * y * z * z +
            eps[9] * z * z * z);
  }
};

struct QuadratureOptions {
  int base_nodes = 64;   // Gauss nodes per outer axis segment
  int max_nodes = 512;   // doubling gives up past this
  double agree_tol = 1e-8;  // relative agreement of successive refinements
};

/// Order-p mean increment of the jet over the radius-rho window, found by
/// minimising the window energy integral with composite Gauss-Legendre
/// quadrature (singularity-split along the level set u = mu) and
/// scan + golden-section search in mu. Node counts are doubled until two
/// successive energies at the minimiser agree to agree_tol; failure to
/// converge raises NumericError. The rescaled increment is mu/(alpha rho^2).
double window_pmean_quadrature(const Jet1D& jet, double rho, double p,
                               const QuadratureOptions& opt = {});
double window_pmean_quadrature(const Jet2D& jet, double rho, double p,
                               const QuadratureOptions& opt = {});
double window_pmean_quadrature(const Jet3D& jet, double rho, double p,
                               const QuadratureOptions& opt = {});

/// Mode of the window value distribution: maximiser of the value density
/// (level-set weight) over the value axis. In 1D the density is 1/|u'|,
/// so the mode sits at the window end with the smaller slope.
double window_mode_quadrature(const Jet1D& jet, double rho,
                              const QuadratureOptions& opt = {});
double window_mode_quadrature(const Jet2D& jet, double rho,
                              const QuadratureOptions& opt = {});
double window_mode_quadrature(const Jet3D& jet, double rho,
                              const QuadratureOptions& opt = {});

/// Closed-form limits of mu/(alpha rho^2) as rho -> 0.
double predicted_kappa(const Jet1D& jet, double p);  // (p-1)/(p+1) beta
double predicted_kappa(const Jet2D& jet, double p);  // ((p-1)b + d)/(p+2)
double predicted_kappa(const Jet3D& jet, double p);  // ((p-1)b + d0+d2)/(p+3)
double predicted_mode_kappa(const Jet2D& jet);       // delta - 2 beta
double predicted_mode_kappa(const Jet3D& jet);       // (d0+d2-2 beta)/2
double predicted_mode_kappa_1d();                    // NaN: shock semantics

struct ConsistencyRecord {
  int dim = 2;
  double p = 0.0;  // -1 tags mode rows (the 2D/3D mode limit coincides)
  double rho = 0.0;
  double kappa_obs = 0.0;
  double kappa_pred = 0.0;
  double rel_err = 0.0;
  double fitted_order = 0.0;  // NaN when fewer than 3 radii in the group
};

std::vector<ConsistencyRecord> consistency_report(
    std::span<const double> ps, std::span<const double> rhos,
    std::span<const Jet1D> jets, const QuadratureOptions& opt = {});
std::vector<ConsistencyRecord> consistency_report(
    std::span<const double> ps, std::span<const double> rhos,
    std::span<const Jet2D> jets, const QuadratureOptions& opt = {});
std::vector<ConsistencyRecord> consistency_report(
    std::span<const double> ps, std::span<const double> rhos,
    std::span<const Jet3D> jets, const QuadratureOptions& opt = {});

std::vector<ConsistencyRecord> mode_consistency_report(
    std::span<const double> rhos, std::span<const Jet2D> jets,
    const QuadratureOptions& opt = {});
std::vector<ConsistencyRecord> mode_consistency_report(
    std::span<const double> rhos, std::span<const Jet3D> jets,
    const QuadratureOptions& opt = {});

/// header: dim,p,rho,kappa_obs,kappa_pred,rel_err,fitted_order
void write_consistency_csv(std::ostream& os,
                           std::span<const ConsistencyRecord> records);

/// Cut-off quadratic density 1 - lambda (z-m)^2 on [-1, 1]: order-p mean
/// computed numerically (per-piece closed-form energy plus scan/golden)
/// against the small-m closed form 2 lambda m / ((p+1) - (p-1) lambda).
double toy_density_pmean(double lambda, double m, double p);
double toy_pmean_closed_form(double lambda, double m, double p);

struct ToyPmeanRow {
  double p, numeric, closed_form, abs_err;
};
std::vector<ToyPmeanRow> toy_pmean_check(double lambda, double m,
                                         std::span<const double> ps);

/// Step-function experiment at rho = 1: locates by bisection the offset
/// theta at which the order-p mean of alpha*(x + delta y^2) plus a jump of
/// height h across x + delta y^2 + theta = 0 switches between the two
/// branches; reports theta*/delta against -1/(p+2). Requires -1 < p < 0.
struct StepExperimentRecord {
  double p, alpha, delta, jump;
  double theta_star = 0.0;
  double theta_over_delta = 0.0;
  double predicted = 0.0;  // -1/(p+2)
};
StepExperimentRecord step_experiment(double p, double alpha, double delta,
                                     double jump,
                                     const QuadratureOptions& opt = {});

/// header: p,alpha,delta,h,theta_over_delta,predicted
void write_step_csv(std::ostream& os,
                    std::span<const StepExperimentRecord> records);

}  // namespace msmooth
