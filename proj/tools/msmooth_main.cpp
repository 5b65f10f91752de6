// Command-line front end: PDE evolutions, windowed M-smoothers, and the
// asymptotic verification sweeps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msmooth/errors.hpp"
#include "msmooth/field.hpp"
#include "msmooth/oracle.hpp"
#include "msmooth/pde1d.hpp"
#include "msmooth/pde2d.hpp"
#include "msmooth/pgm.hpp"
#include "msmooth/window.hpp"

namespace {

using namespace msmooth;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

std::vector<double> parse_time_list(const std::string& csv) {
  std::vector<double> times;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    times.push_back(std::stod(item));
  }
  std::sort(times.begin(), times.end());
  return times;
}

std::string snapshot_path(const std::string& out, double t) {
  const auto dot = out.rfind('.');
  const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
  const std::string ext = dot == std::string::npos ? ".pgm" : out.substr(dot);
  std::ostringstream name;
  name << stem << "_t" << t << ext;
  return name.str();
}

struct EvolveArgs {
  std::string in, out;
  std::string p_text = "2";
  double nu = kDiagonalWeight;
  double tau = 0.0;
  double stop_time = 0.0;
  double epsilon = 1e-10;
  std::string snapshots;
  bool force_tau = false;
};

int run_evolve(const EvolveArgs& args) {
  const bool midrange = args.p_text == "inf" || args.p_text == "midrange";
  GaugeCoeffs coeffs =
      midrange ? midrange_coeffs() : order_p_coeffs(std::stod(args.p_text));

  EvolutionParams prm;
  prm.p = midrange ? 0.0 : std::stod(args.p_text);
  prm.nu = args.nu;
  prm.tau = args.tau;
  prm.epsilon = args.epsilon;
  prm.force_tau = args.force_tau;

  Field u = read_pgm(args.in);
  double t = 0.0;
  for (double snap : parse_time_list(args.snapshots)) {
    if (snap <= t || snap > args.stop_time) continue;
    prm.stop_time = snap - t;
    u = evolve(u, coeffs, prm);
    t = snap;
    write_pgm(u, snapshot_path(args.out, snap));
  }
  prm.stop_time = args.stop_time - t;
  u = evolve(u, coeffs, prm);
  write_pgm(u, args.out);
  return kExitOk;
}

int run_msmooth(const std::string& in, const std::string& out,
                const std::string& filter, double p, double radius, int iters,
                int bins) {
  SmootherConfig cfg;
  cfg.window = {WindowShape::Disc, radius};
  cfg.kind = filter == "mode" ? SmootherKind::Mode : SmootherKind::OrderP;
  cfg.p = p;
  cfg.bins = bins;
  if (radius < 1.0)
    std::cerr << "warning: radius below the grid spacing, window degenerates "
                 "to the center pixel\n";
  Field u = read_pgm(in);
  u = msmooth_iterate(u, cfg, iters);
  write_pgm(u, out);
  return kExitOk;
}

int run_evolve1d(const std::string& in, const std::string& out, double p,
                 double tau, double stop_time, bool force) {
  Field u = read_csv_1d(in);
  u = evolve_linear_1d(u, p, tau, stop_time, force);
  write_csv_1d(u, out);
  return kExitOk;
}

int run_shock1d(const std::string& in, const std::string& out, double tau,
                double stop_time, double theta2, bool force) {
  Field u = read_csv_1d(in);
  Shock1DParams prm;
  prm.tau = tau;
  prm.stop_time = stop_time;
  prm.theta2 = theta2;
  prm.force_tau = force;
  u = evolve_shock_1d(u, prm);
  write_csv_1d(u, out);
  return kExitOk;
}

// Default sweep: the proposition checks at desk scale. Exit 3 when any
// relative error misses its threshold.
int run_verify(const std::string& out, bool quick, unsigned seed,
               bool eps_terms) {
  QuadratureOptions opt;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> eps_dist(-0.3, 0.3);

  const std::vector<double> rhos =
      quick ? std::vector<double>{0.2, 0.1} :
              std::vector<double>{0.4, 0.2, 0.1, 0.05};

  std::vector<Jet2D> jets2;
  for (auto [beta, delta] : {std::pair{0.1, 0.2}, std::pair{0.2, -0.1}}) {
    Jet2D jet;
    jet.beta = beta;
    jet.delta = delta;
    if (eps_terms)
      for (auto& e : jet.eps) e = eps_dist(rng);
    jets2.push_back(jet);
  }
  std::vector<Jet1D> jets1{{1.0, 0.1, 0.0}};
  Jet3D jet3;
  jet3.beta = 0.1;
  jet3.delta0 = 0.2;
  jet3.delta2 = 0.2;
  std::vector<Jet3D> jets3{jet3};

  const std::vector<double> ps2 = quick ? std::vector<double>{1.0, 2.0}
                                        : std::vector<double>{-0.5, 1.0, 2.0, 3.0};
  const std::vector<double> ps1 = {0.5, 2.0, 3.0};
  const std::vector<double> ps3 = {2.0};
  const std::vector<double> rhos3 =
      quick ? std::vector<double>{0.2} : std::vector<double>{0.2, 0.1};

  std::vector<ConsistencyRecord> records;
  auto push = [&records](std::vector<ConsistencyRecord> r) {
    records.insert(records.end(), r.begin(), r.end());
  };
  push(consistency_report(ps2, rhos, std::span<const Jet2D>(jets2), opt));
  push(consistency_report(ps1, rhos, std::span<const Jet1D>(jets1), opt));
  push(consistency_report(ps3, rhos3, std::span<const Jet3D>(jets3), opt));
  push(mode_consistency_report(rhos, std::span<const Jet2D>(jets2), opt));
  push(mode_consistency_report(rhos3, std::span<const Jet3D>(jets3), opt));

  std::ofstream os(out);
  if (!os) throw IoError(out + ": cannot open for writing");
  write_consistency_csv(os, records);

  // threshold check at the smallest radius of each group
  bool ok = true;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const bool last_of_group = i + 1 == records.size() ||
                               records[i + 1].rho >= r.rho ||
                               records[i + 1].p != r.p;
    if (!last_of_group) continue;
    double tol = 0.05;
    if (r.p < 0.0) tol = 0.10;
    if (r.dim == 1) tol = 0.02;
    if (r.dim == 3) tol = 0.10;
    if (quick) tol = std::max(tol, 0.10);
    if (r.rel_err > tol) {
      std::fprintf(stderr, "verify miss: dim=%d p=%g rho=%g rel_err=%g tol=%g\n",
                   r.dim, r.p, r.rho, r.rel_err, tol);
      ok = false;
    }
  }
  std::printf("verify: %zu records -> %s (%s)\n", records.size(), out.c_str(),
              ok ? "all within thresholds" : "THRESHOLD MISS");
  return ok ? kExitOk : kExitNumeric;
}

int run_step_exp(const std::string& out, int count, double jump,
                 unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> p_dist(-0.99, -0.1);
  std::uniform_real_distribution<double> a_dist(0.03, 0.15);
  std::uniform_real_distribution<double> d_dist(-0.2, 0.2);

  std::vector<StepExperimentRecord> records;
  while (static_cast<int>(records.size()) < count) {
    const double p = p_dist(rng);
    const double alpha = a_dist(rng);
    double delta = d_dist(rng);
    // theta*/delta degenerates for a flat interface; skip the sliver
    if (std::abs(delta) < 0.02) continue;
    records.push_back(step_experiment(p, alpha, delta, jump));
  }

  std::ofstream os(out);
  if (!os) throw IoError(out + ": cannot open for writing");
  write_step_csv(os, records);

  double worst = 0.0;
  for (const auto& r : records)
    worst = std::max(worst, std::abs(r.theta_over_delta - r.predicted) /
                                std::abs(r.predicted));
  std::printf("step-exp: %d tuples -> %s (worst relative deviation %.3f)\n",
              count, out.c_str(), worst);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PDE evolutions and windowed M-smoothers for order-p means"};
  app.require_subcommand(1);

  EvolveArgs ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "2D PDE evolution of an image");
  evolve_cmd->add_option("--in", ev.in, "input PGM")->required();
  evolve_cmd->add_option("--out", ev.out, "output PGM")->required();
  evolve_cmd->add_option("--p", ev.p_text,
                         "order p (real, or 'inf' for the midrange flow)");
  evolve_cmd->add_option("--nu", ev.nu, "diagonal weight");
  evolve_cmd->add_option("--tau", ev.tau,
                         "time step (default 0.9x stability limit)");
  evolve_cmd->add_option("--T", ev.stop_time, "stop time")->required();
  evolve_cmd->add_option("--eps", ev.epsilon, "curvature regulariser");
  evolve_cmd->add_option("--snapshots", ev.snapshots,
                         "comma list of intermediate snapshot times");
  evolve_cmd->add_flag("--force-tau", ev.force_tau,
                       "run beyond the stability bound");

  std::string ms_in, ms_out, ms_filter = "mode";
  double ms_p = 1.0, ms_radius = 13.0;
  int ms_iters = 1, ms_bins = 0;
  auto* ms_cmd = app.add_subcommand("msmooth", "iterated windowed M-smoother");
  ms_cmd->add_option("--in", ms_in, "input PGM")->required();
  ms_cmd->add_option("--out", ms_out, "output PGM")->required();
  ms_cmd->add_option("--filter", ms_filter, "pmean or mode")
      ->check(CLI::IsMember({"pmean", "mode"}));
  ms_cmd->add_option("--p", ms_p, "order for --filter pmean");
  ms_cmd->add_option("--radius", ms_radius, "window radius in pixels");
  ms_cmd->add_option("--iters", ms_iters, "iteration count");
  ms_cmd->add_option("--bins", ms_bins, "histogram bins (0 = default rule)");

  std::string e1_in, e1_out;
  double e1_p = 2.0, e1_tau = 0.0, e1_T = 0.0;
  bool e1_force = false;
  auto* e1_cmd = app.add_subcommand("evolve1d", "1D evolution u_t=(p-1)u_xx");
  e1_cmd->add_option("--in", e1_in, "input CSV (one sample per line)")->required();
  e1_cmd->add_option("--out", e1_out, "output CSV")->required();
  e1_cmd->add_option("--p", e1_p, "order p");
  e1_cmd->add_option("--tau", e1_tau, "time step (default 0.9x limit)");
  e1_cmd->add_option("--T", e1_T, "stop time")->required();
  e1_cmd->add_flag("--force-tau", e1_force, "run beyond the stability bound");

  std::string sh_in, sh_out;
  double sh_tau = 0.0, sh_T = 0.0, sh_theta2 = -1.0;
  bool sh_force = false;
  auto* sh_cmd = app.add_subcommand("shock1d", "1D shock filter evolution");
  sh_cmd->add_option("--in", sh_in, "input CSV")->required();
  sh_cmd->add_option("--out", sh_out, "output CSV")->required();
  sh_cmd->add_option("--tau", sh_tau, "time step (default 0.9h)");
  sh_cmd->add_option("--T", sh_T, "stop time")->required();
  sh_cmd->add_option("--theta2", sh_theta2, "sgn(u_xx) dead zone");
  sh_cmd->add_flag("--force-tau", sh_force, "run beyond tau <= h");

  std::string vf_out = "verify.csv";
  bool vf_quick = false, vf_eps = false;
  unsigned vf_seed = 1234;
  auto* vf_cmd = app.add_subcommand("verify", "asymptotic consistency sweep");
  vf_cmd->add_option("--out", vf_out, "CSV report path");
  vf_cmd->add_flag("--quick", vf_quick, "reduced sweep for smoke testing");
  vf_cmd->add_option("--seed", vf_seed, "seed for --eps-terms");
  vf_cmd->add_flag("--eps-terms", vf_eps,
                   "randomise third-order jet terms (must not shift kappa)");

  std::string st_out = "step.csv";
  int st_count = 20;
  double st_jump = 0.01;
  unsigned st_seed = 1234;
  auto* st_cmd =
      app.add_subcommand("step-exp", "step-function threshold experiment");
  st_cmd->add_option("--out", st_out, "CSV report path");
  st_cmd->add_option("--count", st_count, "number of random tuples");
  st_cmd->add_option("--jump", st_jump, "jump height h");
  st_cmd->add_option("--seed", st_seed, "random seed");

  try {
    app.parse(argc, argv);
    if (evolve_cmd->parsed()) return run_evolve(ev);
    if (ms_cmd->parsed())
      return run_msmooth(ms_in, ms_out, ms_filter, ms_p, ms_radius, ms_iters,
                         ms_bins);
    if (e1_cmd->parsed())
      return run_evolve1d(e1_in, e1_out, e1_p, e1_tau, e1_T, e1_force);
    if (sh_cmd->parsed())
      return run_shock1d(sh_in, sh_out, sh_tau, sh_T, sh_theta2, sh_force);
    if (vf_cmd->parsed()) return run_verify(vf_out, vf_quick, vf_seed, vf_eps);
    if (st_cmd->parsed()) return run_step_exp(st_out, st_count, st_jump, st_seed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
