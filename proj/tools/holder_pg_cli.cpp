// Command-line front end: run | sweep | validate | predict.
//
// Exit codes: 0 success, 1 run/probe/construction failure, 2 bad arguments.

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holder_pg/holder_pg.hpp"

namespace hp = holder_pg;

namespace {

struct Options {
  hp::ExperimentSpec spec;
  std::string algo = "pgdm";
  std::optional<double> tau0, rho0, mu, residual_tau0, d0;
  std::optional<std::size_t> max_iters;
  bool stop = false, no_stop = false, skip_probes = false;
  std::size_t pairs = 10000;
  std::string param;
  std::vector<double> values;
  std::string out_dir = "sweep_out";
  bool serial = false;
};

void add_problem_flags(CLI::App* app, Options& o) {
  app->set_help_flag("--help", "print this help and exit");  // -h is taken by the mesh width
  app->add_option("--problem", o.spec.problem, "example1 | quadratic | elliptic1 | elliptic2")
      ->check(CLI::IsMember({"example1", "quadratic", "elliptic1", "elliptic2"}));
  app->add_option("--h", o.spec.h, "mesh width (1/k)");
  app->add_option("--gamma", o.spec.gamma, "elliptic1 reaction weight");
  app->add_option("--alpha", o.spec.alpha, "Hölder exponent of the reaction term");
  app->add_option("--p", o.spec.p, "elliptic2 growth exponent");
  app->add_option("--delta", o.spec.delta, "elliptic2 reaction weight");
  app->add_option("--dim", o.spec.dim, "quadratic dimension");
  app->add_option("--mu-preset", o.spec.mu_preset, "elliptic1 mu: 2pi2 | lambda-min")
      ->check(CLI::IsMember({"2pi2", "lambda-min"}));
  app->add_option("--mu", o.mu, "override the strong convexity modulus");
  app->add_option("--eps", o.spec.epsilon, "accuracy target in (0, 1)");
}

void add_solver_flags(CLI::App* app, Options& o) {
  app->add_option("--algo", o.algo, "pgdm | upgm | ufgm | ufgm-fixed")
      ->check(CLI::IsMember({"pgdm", "upgm", "ufgm", "ufgm-fixed"}));
  app->add_option("--tau0", o.tau0, "stepsize scale (times h^2 on mesh problems)");
  app->add_option("--rho0", o.rho0, "initial line-search curvature");
  app->add_option("--max-iters", o.max_iters, "iteration budget");
  app->add_option("--residual-tau0", o.residual_tau0, "stepsize scale used in the residual column");
  app->add_option("--record-every", o.spec.record_every, "record every k-th iteration");
  app->add_flag("--stop-at-target", o.stop, "stop once the accuracy target is met");
  app->add_flag("--no-stop-at-target", o.no_stop, "always run the full budget");
  app->add_flag("--audit", o.spec.audit, "record the estimating-sequence audit (ufgm)");
}

void finalize(Options& o) {
  o.spec.algo = hp::algorithm_from_string(o.algo);
  o.spec.tau0 = o.tau0;
  o.spec.rho0 = o.rho0;
  o.spec.mu_override = o.mu;
  o.spec.residual_tau0 = o.residual_tau0;
  o.spec.max_iters = o.max_iters;
  if (o.stop && o.no_stop) throw CLI::ValidationError("--stop-at-target and --no-stop-at-target are exclusive");
  if (o.stop) o.spec.stop_at_target = true;
  if (o.no_stop) o.spec.stop_at_target = false;
  o.spec.seed = hp::seed_from_env();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool run_probes(const hp::ProblemInstance& p, std::size_t pairs, std::uint64_t seed) {
  const auto reports = hp::run_validation_suite(p, pairs, seed);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (!ok) std::cerr << hp::format_reports(reports);
  return ok;
}

int cmd_run(Options& o) {
  finalize(o);
  const auto built = hp::build_problem(o.spec);
  if (!o.skip_probes && !run_probes(built.instance, 1000, o.spec.seed)) {
    std::cerr << "error: probe failure on " << built.instance.name << "\n";
    return 1;
  }
  const auto res = hp::run_experiment(o.spec, built);
  const auto& t = res.trace;
  const std::string path = o.spec.csv_path.empty()
                               ? o.spec.problem + "_" + hp::to_string(o.spec.algo) + ".csv"
                               : o.spec.csv_path;
  hp::write_text_file(path, hp::trace_to_csv(t));

  std::cout << "problem     " << built.instance.name << " (n=" << built.instance.dim << ")\n";
  std::cout << "algorithm   " << hp::to_string(o.spec.algo) << "\n";
  std::cout << "iterations  " << t.summary.iterations
            << (t.reached_target() ? " (target reached)" : " (budget exhausted)") << "\n";
  if (!t.records().empty()) {
    const auto& last = t.last();
    std::cout << "f_final     " << fmt(last.f_value) << "\n";
    if (last.dist_to_min) std::cout << "dist_final  " << fmt(*last.dist_to_min) << "\n";
    if (last.residual) std::cout << "residual    " << fmt(*last.residual) << "\n";
  }
  std::cout << "ls_trials   " << t.summary.total_ls_trials << "\n";
  std::cout << "wall_s      " << fmt(t.summary.wall_seconds) << "\n";
  std::cout << "csv         " << path << "\n";
  if (t.audit) {
    const auto audit = hp::estimating_sequence_checks(*t.audit, built.instance, 100, o.spec.seed);
    std::cout << hp::format_reports(audit);
    for (const auto& r : audit) {
      if (!r.passed()) return 1;
    }
  }
  return 0;
}

int cmd_sweep(Options& o) {
  finalize(o);
  const auto res = hp::sweep(o.spec, o.param, o.values, o.out_dir, !o.serial);
  for (const auto& e : res.entries) {
    std::cout << o.param << "=" << hp::format_param_value(e.value) << "  ";
    if (!e.error.empty()) {
      std::cout << "FAILED: " << e.error << "\n";
      continue;
    }
    std::cout << "iterations=" << e.trace.summary.iterations;
    if (e.final_metric) {
      std::cout << (res.metric == hp::Metric::DistToMin ? "  final_dist=" : "  final_residual=") << fmt(*e.final_metric);
    }
    if (e.k_star) std::cout << "  k_star=" << *e.k_star;
    std::cout << "  csv=" << e.csv_path << "\n";
  }
  std::cout << "summary " << res.summary_path << "\nplot    " << res.svg_path << "\n";
  return res.ok() ? 0 : 1;
}

int cmd_validate(Options& o) {
  finalize(o);
  const auto built = hp::build_problem(o.spec);
  const auto reports = hp::run_validation_suite(built.instance, o.pairs, o.spec.seed);
  std::cout << hp::format_reports(reports);
  for (const auto& r : reports) {
    if (!r.passed()) return 1;
  }
  return 0;
}

int cmd_predict(Options& o) {
  finalize(o);
  const auto built = hp::build_problem(o.spec);
  const auto& p = built.instance;
  const auto metas = p.metas();
  const double mu = o.mu.value_or(p.mu);
  const double ah = hp::alpha_hat(metas);
  const double M = hp::constant_M(metas, mu);
  const double eps = o.spec.epsilon;

  std::cout << "problem     " << p.name << "\n";
  std::cout << "n           " << p.dim << "\n";
  std::cout << "mu          " << fmt(mu) << "\n";
  for (std::size_t i = 0; i < metas.size(); ++i) {
    std::cout << "f" << i + 1 << "          alpha=" << fmt(metas[i].alpha) << "  L(l2)=" << fmt(metas[i].lipschitz_holder);
    if (metas[i].alpha < 1.0 && built.coordinatewise_l2) {
      std::cout << "  L(per-coordinate)=" << fmt(*built.coordinatewise_l2);
    }
    std::cout << "\n";
  }
  std::cout << "alpha_hat   " << fmt(ah) << "\n";
  std::cout << "M           " << fmt(M) << "\n";
  std::cout << "eps         " << fmt(eps) << "\n";
  std::cout << "tau         " << fmt(hp::pgdm_stepsize(eps, M, ah)) << "\n";
  try {
    std::cout << "nu          " << fmt(hp::ufgm_fixed_nu(eps, M, mu, ah)) << "\n";
  } catch (const hp::ParameterInconsistency& e) {
    std::cout << "nu          unavailable (" << e.what() << ")\n";
  }
  const double omega = hp::ufgm_omega(M, mu, ah);
  std::cout << "omega       " << fmt(omega) << "\n";
  std::cout << "pgdm eps-exponent  " << fmt(hp::pgdm_exponent(ah)) << "\n";
  std::cout << "ufgm eps-exponent  " << fmt(hp::ufgm_exponent(ah)) << "\n";

  std::optional<double> d0 = o.d0;
  std::optional<double> gap0;
  const hp::DenseVector u0 = hp::default_initial(p);
  if (!d0 && p.minimizer) d0 = hp::distance(u0, *p.minimizer);
  if (p.optimal_value) gap0 = hp::eval_objective(p, u0) - *p.optimal_value;

  const double e_pg = hp::pgdm_exponent(ah);
  const double e_fg = hp::ufgm_exponent(ah);
  if (d0 && *d0 > 0.0) {
    std::cout << "d0          " << fmt(*d0) << "\n";
    for (auto a : {hp::Algorithm::Pgdm, hp::Algorithm::Upgm}) {
      const auto pr = hp::predict_iterations(a, eps, M, mu, ah, *d0);
      std::cout << "bound " << hp::to_string(a) << "  " << fmt(pr.predicted_iterations) << "\n";
    }
    if (gap0) {
      const auto pr = hp::predict_iterations(hp::Algorithm::Ufgm, eps, M, mu, ah, *d0, gap0);
      std::cout << "bound ufgm  " << fmt(pr.predicted_iterations) << "\n";
    } else {
      std::cout << "bound ufgm  4 log(sqrt(2 chi)/eps) / " << fmt(omega * std::pow(eps, e_fg))
                << ",  chi = 2 (f(u0) - f*)/" << fmt(mu) << " + " << fmt(*d0 * *d0) << "\n";
    }
  } else {
    // No minimizer and no --d0: print the bounds as functions of d0.
    const double c = 4.0 * M / (mu * (1.0 + ah) * std::pow(eps, e_pg));
    std::cout << "d0          unknown (pass --d0)\n";
    std::cout << "bound pgdm  " << fmt(c) << " * log((" << fmt(2.0 * M / mu) << " d0^2)^" << fmt((1.0 + ah) / 4.0)
              << " / " << fmt(eps) << ")\n";
    std::cout << "bound ufgm  " << fmt(4.0 / (omega * std::pow(eps, e_fg))) << " * log(sqrt(2 chi) / " << fmt(eps)
              << "),  chi = 2 gap0/" << fmt(mu) << " + d0^2\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected gradient methods for Hölder-smooth strongly convex problems"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "single solver run, CSV trace");
  add_problem_flags(run, o);
  add_solver_flags(run, o);
  run->add_option("--csv", o.spec.csv_path, "output CSV path");
  run->add_flag("--skip-probes", o.skip_probes, "skip the pre-run oracle probes");

  auto* sw = app.add_subcommand("sweep", "parameter sweep, per-run CSVs and an SVG overlay");
  add_problem_flags(sw, o);
  add_solver_flags(sw, o);
  sw->add_option("--param", o.param, "alpha | tau0 | eps")->required()->check(CLI::IsMember({"alpha", "tau0", "eps"}));
  sw->add_option("--values", o.values, "values to sweep")->required()->expected(1, -1);
  sw->add_option("--out-dir", o.out_dir, "output directory");
  sw->add_flag("--serial", o.serial, "run sweep values one after another");

  auto* val = app.add_subcommand("validate", "oracle probes on a problem");
  add_problem_flags(val, o);
  val->add_option("--pairs", o.pairs, "sample pairs per probe");

  auto* pred = app.add_subcommand("predict", "stepsizes and iteration bounds");
  add_problem_flags(pred, o);
  pred->add_option("--d0", o.d0, "initial distance to the minimizer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sw) return cmd_sweep(o);
    if (*val) return cmd_validate(o);
    if (*pred) return cmd_predict(o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
