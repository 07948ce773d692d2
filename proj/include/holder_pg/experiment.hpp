#pragma once

// Experiment runner: builds a problem and solver configuration from a flat
// spec, serializes traces to CSV, runs parameter sweeps and draws semilog
// SVG overlays.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "holder_pg/core.hpp"
#include "holder_pg/problems.hpp"
#include "holder_pg/solvers.hpp"
#include "holder_pg/stepsize.hpp"
#include "holder_pg/validation.hpp"

namespace holder_pg {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seed from HOLDER_PG_SEED, falling back to 42.
[[nodiscard]] inline std::uint64_t seed_from_env() {
  const char* s = std::getenv("HOLDER_PG_SEED");
  if (s == nullptr || *s == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0') throw std::invalid_argument(std::string("HOLDER_PG_SEED is not an integer: ") + s);
  return v;
}

struct ExperimentSpec {
  std::string problem = "example1";  // example1 | quadratic | elliptic1 | elliptic2
  double h = 0.0625;
  double gamma = 0.5;
  double alpha = 0.5;
  double p = 1.5;
  double delta = 20.0;
  std::size_t dim = 1;                  // quadratic only
  std::string mu_preset = "2pi2";       // elliptic1: 2pi2 | lambda-min

  Algorithm algo = Algorithm::Pgdm;
  double epsilon = 1e-2;
  /// Stepsize scale: tau (PGDM) or nu (ufgm-fixed) equals tau0 * h^2 on mesh
  /// problems and tau0 itself otherwise.
  std::optional<double> tau0;
  std::optional<double> rho0;
  std::optional<std::size_t> max_iters;
  std::optional<double> mu_override;
  /// Residual column stepsize, scaled like tau0.
  std::optional<double> residual_tau0;
  std::optional<bool> stop_at_target;
  std::size_t record_every = 1;
  bool audit = false;

  std::string csv_path;
  std::uint64_t seed = kDefaultSeed;
};

[[nodiscard]] inline bool is_mesh_problem(const std::string& name) {
  return name == "elliptic1" || name == "elliptic2";
}

/// A problem together with the presentation data the CLI prints.
struct BuiltProblem {
  ProblemInstance instance;
  std::optional<double> mesh_width;
  /// Per-coordinate Hölder constant of the low-regularity component.
  std::optional<double> coordinatewise_l2;
};

[[nodiscard]] inline BuiltProblem build_problem(const ExperimentSpec& s) {
  BuiltProblem b;
  if (s.problem == "example1") {
    b.instance = example1();
  } else if (s.problem == "quadratic") {
    b.instance = quadratic(s.dim);
  } else if (s.problem == "elliptic1") {
    Elliptic1Mu mu;
    if (s.mu_preset == "2pi2") {
      mu = Elliptic1Mu::TwoPiSquared;
    } else if (s.mu_preset == "lambda-min") {
      mu = Elliptic1Mu::DiscreteLambdaMin;
    } else {
      throw std::invalid_argument("unknown mu preset '" + s.mu_preset + "'");
    }
    const auto spec = make_elliptic1_spec(s.h, s.gamma, s.alpha);
    b.mesh_width = spec.h;
    b.coordinatewise_l2 = spec.coordinatewise_l2();
    b.instance = elliptic1(spec, mu);
  } else if (s.problem == "elliptic2") {
    const auto spec = make_elliptic2_spec(s.h, s.alpha, s.p, s.delta);
    b.mesh_width = spec.h;
    b.coordinatewise_l2 = spec.coordinatewise_l2();
    b.instance = elliptic2(spec);
  } else {
    throw std::invalid_argument("unknown problem '" + s.problem + "'");
  }
  return b;
}

/// Multiplier applied to tau0: h^2 on mesh problems, 1 otherwise.
[[nodiscard]] inline double stepsize_scale(const BuiltProblem& b) {
  return b.mesh_width ? *b.mesh_width * *b.mesh_width : 1.0;
}

[[nodiscard]] inline std::size_t default_max_iters(const std::string& problem) {
  if (problem == "elliptic1") return 20000;
  if (problem == "elliptic2") return 10000;
  return 100000;
}

[[nodiscard]] inline SolverConfig make_solver_config(const ExperimentSpec& s, const BuiltProblem& b) {
  SolverConfig c;
  c.epsilon = s.epsilon;
  c.max_iters = s.max_iters.value_or(default_max_iters(s.problem));
  c.mu_override = s.mu_override;
  c.record_every = s.record_every;
  c.audit_estimating = s.audit;
  c.stop_at_target = s.stop_at_target.value_or(!is_mesh_problem(s.problem));
  const double scale = stepsize_scale(b);
  if (s.tau0) {
    if (s.algo == Algorithm::Pgdm || s.algo == Algorithm::UfgmFixed) {
      c.fixed_step = *s.tau0 * scale;
    } else {
      throw std::invalid_argument(std::string("--tau0 does not apply to ") + to_string(s.algo));
    }
  } else if (s.algo == Algorithm::UfgmFixed) {
    const auto metas = b.instance.metas();
    const double mu = s.mu_override.value_or(b.instance.mu);
    c.fixed_step = ufgm_fixed_nu(s.epsilon, constant_M(metas, mu), mu, alpha_hat(metas));
  }
  // Line searches on mesh problems start from the stepsize 20 h^2.
  c.rho0 = s.rho0.value_or(b.mesh_width ? 1.0 / (20.0 * scale) : 1.0);
  if (s.residual_tau0) c.residual_step = *s.residual_tau0 * scale;
  return c;
}

struct RunResult {
  SolverTrace trace;
  SolverConfig config;
};

[[nodiscard]] inline RunResult run_experiment(const ExperimentSpec& s, const BuiltProblem& b) {
  RunResult r{SolverTrace{}, make_solver_config(s, b)};
  r.trace = solve(s.algo, b.instance, r.config);
  return r;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader = "iter,f_value,dist_to_min,residual,rho,ls_trials";

[[nodiscard]] inline std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

[[nodiscard]] inline std::string trace_to_csv(const SolverTrace& t) {
  std::string out = kCsvHeader;
  out += '\n';
  auto opt = [&out](const std::optional<double>& v) {
    out += ',';
    if (v) out += format_float(*v);
  };
  for (const auto& r : t.records()) {
    out += std::to_string(r.iter);
    out += ',';
    out += format_float(r.f_value);
    opt(r.dist_to_min);
    opt(r.residual);
    opt(r.rho);
    out += ',';
    if (r.ls_trials) out += std::to_string(*r.ls_trials);
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace detail

/// Self-contained SVG with a log10 y axis. Non-positive y values are dropped.
[[nodiscard]] inline std::string render_semilog_svg(const std::vector<PlotSeries>& series, const std::string& title,
                                                    const std::string& y_label) {
  constexpr double W = 800, H = 500, L = 80, R = 180, T = 40, B = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;
  if (xmax <= xmin) xmax = xmin + 1;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return T + (ymax - ly) / (ymax - ymin) * (H - T - B); };

  std::ostringstream o;
  char buf[256];
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << detail::xml_escape(title)
    << "</text>\n";
  const int decades = static_cast<int>(ymax - ymin);
  const int ystep = std::max(1, decades / 10);
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); d += ystep) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"#ddd\"/>"
                  "<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">1e%d</text>\n",
                  L, py(d), W - R, py(d), L - 6, py(d) + 4, d);
    o << buf;
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%g</text>\n", px(xv), H - B + 18,
                  std::round(xv));
    o << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                W - L - R, H - T - B);
  o << buf;
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">iteration</text>\n";
  o << "<text transform=\"translate(20," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << detail::xml_escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 10];
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i % stride != 0 && i + 1 != s.x.size()) continue;
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(std::log10(s.y[i])));
      o << buf;
    }
    o << "\"/>\n";
    const double ly = T + 16 + 18.0 * static_cast<double>(k);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%g\" y=\"%g\">",
                  W - R + 10, ly, W - R + 34, ly, color, W - R + 40, ly + 4);
    o << buf << detail::xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class Metric { DistToMin, Residual };

/// Distance when the minimizer is known, residual otherwise.
[[nodiscard]] inline Metric default_metric(const ProblemInstance& p) {
  return p.minimizer ? Metric::DistToMin : Metric::Residual;
}

[[nodiscard]] inline std::optional<double> metric_of(const IterationRecord& r, Metric m) {
  return m == Metric::DistToMin ? r.dist_to_min : r.residual;
}

/// First recorded iteration whose distance to the minimizer is <= eps.
[[nodiscard]] inline std::optional<std::size_t> first_hit(const SolverTrace& t, double eps) {
  for (const auto& r : t.records()) {
    if (r.dist_to_min && *r.dist_to_min <= eps) return r.iter;
  }
  return std::nullopt;
}

inline void apply_sweep_value(ExperimentSpec& s, const std::string& param, double value) {
  if (param == "alpha") {
    s.alpha = value;
  } else if (param == "tau0") {
    s.tau0 = value;
  } else if (param == "eps") {
    s.epsilon = value;
  } else {
    throw std::invalid_argument("sweep parameter must be alpha, tau0 or eps, got '" + param + "'");
  }
}

struct SweepEntry {
  double value = 0.0;
  std::string csv_path;
  SolverTrace trace;
  std::optional<double> final_metric;
  std::optional<std::size_t> k_star;
  std::string error;  // non-empty when the run failed
};

struct SweepResult {
  std::string param;
  Metric metric = Metric::DistToMin;
  std::vector<SweepEntry> entries;
  std::string summary_path;
  std::string svg_path;

  [[nodiscard]] bool ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const SweepEntry& e) { return e.error.empty(); });
  }
};

[[nodiscard]] inline std::string format_param_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// One run per value (in parallel), each writing its own CSV under out_dir;
/// summary.csv and an SVG overlay are written after all runs finish. Failed
/// runs are reported in their entry and in the summary.
[[nodiscard]] inline SweepResult sweep(const ExperimentSpec& base, const std::string& param,
                                       const std::vector<double>& values, const std::filesystem::path& out_dir,
                                       bool parallel = true) {
  if (values.empty()) throw std::invalid_argument("sweep: no values given");
  {
    ExperimentSpec probe = base;
    apply_sweep_value(probe, param, values.front());
  }
  SweepResult res;
  res.param = param;
  res.metric = default_metric(build_problem(base).instance);
  std::filesystem::create_directories(out_dir);

  auto one = [&](double value) {
    SweepEntry e;
    e.value = value;
    ExperimentSpec s = base;
    apply_sweep_value(s, param, value);
    e.csv_path = (out_dir / (base.problem + "_" + to_string(base.algo) + "_" + param + "_" +
                             format_param_value(value) + ".csv"))
                     .string();
    try {
      const BuiltProblem b = build_problem(s);
      e.trace = run_experiment(s, b).trace;
      write_text_file(e.csv_path, trace_to_csv(e.trace));
      if (!e.trace.records().empty()) e.final_metric = metric_of(e.trace.last(), res.metric);
      e.k_star = first_hit(e.trace, s.epsilon);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    return e;
  };

  if (parallel) {
    std::vector<std::future<SweepEntry>> jobs;
    jobs.reserve(values.size());
    for (double v : values) jobs.push_back(std::async(std::launch::async, one, v));
    for (auto& j : jobs) res.entries.push_back(j.get());
  } else {
    for (double v : values) res.entries.push_back(one(v));
  }

  std::string summary = param + ",iterations,final_" + (res.metric == Metric::DistToMin ? "dist_to_min" : "residual") +
                        ",k_star,total_ls_trials,csv,error\n";
  std::vector<PlotSeries> plot;
  for (const auto& e : res.entries) {
    summary += format_float(e.value) + ',';
    if (e.error.empty()) {
      summary += std::to_string(e.trace.summary.iterations) + ',';
      if (e.final_metric) summary += format_float(*e.final_metric);
      summary += ',';
      if (e.k_star) summary += std::to_string(*e.k_star);
      summary += ',' + std::to_string(e.trace.summary.total_ls_trials) + ',' + e.csv_path + ",\n";
      PlotSeries ps;
      ps.label = param + "=" + format_param_value(e.value);
      for (const auto& r : e.trace.records()) {
        if (const auto y = metric_of(r, res.metric)) {
          ps.x.push_back(static_cast<double>(r.iter));
          ps.y.push_back(*y);
        }
      }
      plot.push_back(std::move(ps));
    } else {
      std::string msg = e.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      summary += ",,,," + e.csv_path + ',' + msg + '\n';
    }
  }
  res.summary_path = (out_dir / "summary.csv").string();
  write_text_file(res.summary_path, summary);
  res.svg_path = (out_dir / (base.problem + "_" + to_string(base.algo) + "_" + param + ".svg")).string();
  const std::string y_label = res.metric == Metric::DistToMin ? "||u_k - u*||" : "residual";
  write_text_file(res.svg_path, render_semilog_svg(plot, base.problem + " " + to_string(base.algo) + ", sweep over " +
                                                             param, y_label));
  return res;
}

/// Least-squares slope of log(k) against log(1/eps).
[[nodiscard]] inline double loglog_slope(const std::vector<double>& eps, const std::vector<double>& k) {
  if (eps.size() != k.size() || eps.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    mx += std::log(1.0 / eps[i]) / n;
    my += std::log(k[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double dx = std::log(1.0 / eps[i]) - mx;
    sxy += dx * (std::log(k[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace holder_pg
