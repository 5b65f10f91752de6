#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "msmooth/oracle.hpp"

using namespace msmooth;

TEST_CASE("closed-form kappa predictions") {
  Jet2D j2;
  j2.beta = 0.7;  // drops out at p = 1
  j2.delta = 0.3;
  CHECK(predicted_kappa(j2, 1.0) == doctest::Approx(0.1));
  j2.beta = 0.1;
  CHECK(predicted_kappa(j2, -1.0 + 1e-14) == doctest::Approx(0.1));
  CHECK(predicted_mode_kappa(j2) == doctest::Approx(0.1));
  Jet2D mean_jet;
  mean_jet.beta = 0.1;
  mean_jet.delta = 0.2;
  CHECK(predicted_kappa(mean_jet, 2.0) == doctest::Approx(0.075));

  Jet3D j3;
  j3.beta = 0.1;
  j3.delta0 = 0.2;
  j3.delta2 = 0.2;
  CHECK(predicted_kappa(j3, 2.0) == doctest::Approx(0.1));
  CHECK(predicted_mode_kappa(j3) == doctest::Approx(0.1));
  CHECK(std::isnan(predicted_mode_kappa_1d()));

  Jet1D j1;
  j1.beta = 0.1;
  CHECK(predicted_kappa(j1, 3.0) == doctest::Approx(0.05));
}

TEST_CASE("pure ramps have a vanishing window mean for any p") {
  Jet2D flat;  // beta = delta = 0
  for (double p : {-0.5, 1.0, 2.0}) {
    const double mu = window_pmean_quadrature(flat, 0.3, p);
    CHECK(std::abs(mu) < 1e-9);
  }
  Jet1D flat1;
  CHECK(std::abs(window_pmean_quadrature(flat1, 0.3, 2.0)) < 1e-12);
}

TEST_CASE("2D mean window (p=2) matches the closed form exactly") {
  // the mean of a quadratic jet over a disc is exact at every radius
  Jet2D jet;
  jet.beta = 0.1;
  jet.delta = 0.2;
  for (double rho : {0.3, 0.1}) {
    const double kappa =
        window_pmean_quadrature(jet, rho, 2.0) / (jet.alpha * rho * rho);
    CHECK(kappa == doctest::Approx(0.075).epsilon(1e-6));
  }
}

TEST_CASE("1D order-3 window mean approaches (p-1)/(p+1) beta") {
  Jet1D jet;
  jet.beta = 0.1;
  const double kappa =
      window_pmean_quadrature(jet, 0.05, 3.0) / (jet.alpha * 0.05 * 0.05);
  CHECK(kappa == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("kappa is invariant under rescaling alpha") {
  std::vector<double> kappas;
  for (double alpha : {0.5, 1.0, 2.0}) {
    Jet2D jet;
    jet.alpha = alpha;
    jet.beta = 0.1;
    jet.delta = 0.2;
    kappas.push_back(window_pmean_quadrature(jet, 0.2, 1.0) /
                     (alpha * 0.2 * 0.2));
  }
  CHECK(kappas[0] == doctest::Approx(kappas[1]).epsilon(1e-7));
  CHECK(kappas[2] == doctest::Approx(kappas[1]).epsilon(1e-7));
}

TEST_CASE("third-order jet terms do not move kappa at leading order") {
  Jet2D base;
  base.beta = 0.1;
  base.delta = 0.2;
  Jet2D bumpy = base;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (auto& e : bumpy.eps) e = dist(rng);
  for (double p : {1.0, 2.0}) {
    const double k0 = window_pmean_quadrature(base, 0.05, p) / (0.05 * 0.05);
    const double k1 = window_pmean_quadrature(bumpy, 0.05, p) / (0.05 * 0.05);
    CHECK(k1 == doctest::Approx(k0).epsilon(0.02));
  }
}

TEST_CASE("2D mode quadrature approaches delta - 2 beta") {
  Jet2D jet;
  jet.beta = 0.1;
  jet.delta = 0.3;
  const double rho = 0.05;
  const double kappa = window_mode_quadrature(jet, rho) / (rho * rho);
  CHECK(kappa == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("3D mode quadrature approaches (d0+d2-2b)/2") {
  Jet3D jet;
  jet.beta = 0.1;
  jet.delta0 = 0.2;
  jet.delta2 = 0.2;
  const double rho = 0.05;
  const double kappa = window_mode_quadrature(jet, rho) / (rho * rho);
  CHECK(kappa == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("1D mode endpoint rule is exact for convex monotone jets") {
  Jet1D jet;
  jet.beta = 0.2;  // u'' > 0: density peaks at the left end
  const double rho = 0.3;
  CHECK(window_mode_quadrature(jet, rho) == jet.value(-rho));
  Jet1D concave;
  concave.beta = -0.2;
  CHECK(window_mode_quadrature(concave, rho) == concave.value(rho));
}

TEST_CASE("symmetric jets have symmetric value densities (mode at 0)") {
  Jet2D flat;
  CHECK(std::abs(window_mode_quadrature(flat, 0.2)) < 1e-6);
}

TEST_CASE("consistency report shrinks errors with the radius") {
  std::vector<double> ps{1.0};
  std::vector<double> rhos{0.4, 0.2, 0.1};
  std::vector<Jet2D> jets(1);
  jets[0].beta = 0.1;
  jets[0].delta = 0.2;
  const auto records =
      consistency_report(ps, rhos, std::span<const Jet2D>(jets));
  REQUIRE(records.size() == 3);
  CHECK(records[2].rel_err <= records[0].rel_err);
  CHECK(!std::isnan(records[0].fitted_order));
  CHECK(records[0].kappa_pred == doctest::Approx(0.2 / 3.0));

  std::ostringstream os;
  write_consistency_csv(os, records);
  CHECK(os.str().find("dim,p,rho,kappa_obs,kappa_pred,rel_err,fitted_order") ==
        0);
}

TEST_CASE("median kappa does not depend on beta") {
  std::vector<double> kappas;
  for (double beta : {0.1, 0.25}) {
    Jet2D jet;
    jet.beta = beta;
    jet.delta = 0.3;
    kappas.push_back(window_pmean_quadrature(jet, 0.1, 1.0) / (0.1 * 0.1));
  }
  CHECK(kappas[0] == doctest::Approx(kappas[1]).epsilon(0.02));
}

TEST_CASE("toy density pmean against the closed form") {
  const double lambda = 0.5, m = 0.01;
  CHECK(std::abs(toy_density_pmean(lambda, m, 1.0) - 0.005) < 1e-5);
  CHECK(std::abs(toy_density_pmean(lambda, m, -0.99) - m) < 2e-4);
  const auto rows =
      toy_pmean_check(lambda, m, std::vector<double>{-0.9, -0.5, 1.0, 2.0});
  for (const auto& row : rows) CHECK(row.abs_err < 1e-5);
  // flattening density sends the mean to the symmetry center
  CHECK(std::abs(toy_density_pmean(1e-8, m, 0.5)) < 1e-6);
  // p -> -1 approaches the mode monotonically
  const double e1 = std::abs(toy_density_pmean(lambda, m, -0.9) - m);
  const double e2 = std::abs(toy_density_pmean(lambda, m, -0.99) - m);
  CHECK(e2 < e1);
}

TEST_CASE("step experiment reproduces the threshold at small jump height") {
  const auto rec = step_experiment(-0.5, 0.1, 0.1, 0.01);
  CHECK(rec.predicted == doctest::Approx(-2.0 / 3.0));
  CHECK(rec.theta_over_delta ==
        doctest::Approx(rec.predicted).epsilon(0.10));
  std::ostringstream os;
  write_step_csv(os, std::vector<StepExperimentRecord>{rec});
  CHECK(os.str().find("p,alpha,delta,h,theta_over_delta,predicted") == 0);
}

TEST_CASE("step experiment rejects invalid orders") {
  CHECK_THROWS_AS(step_experiment(0.5, 0.1, 0.1, 0.01), ConfigError);
  CHECK_THROWS_AS(step_experiment(-1.5, 0.1, 0.1, 0.01), ConfigError);
}
