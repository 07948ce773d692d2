#pragma once

// Seeded random probes that check the metadata a problem registers (gradient,
// strong convexity, Hölder constants, inexact-oracle threshold) and the
// estimating-sequence inequalities recorded by an audited UFGM run.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "holder_pg/core.hpp"
#include "holder_pg/solvers.hpp"
#include "holder_pg/stepsize.hpp"

namespace holder_pg {

inline constexpr double kProbeSlack = 1e-9;
inline constexpr double kKinkExclusion = 1e-12;

struct ProbeReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Most negative (or smallest) slack seen; positive means every sample had room.
  double worst_margin = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool passed() const noexcept { return violations == 0; }

  void observe(double margin) {
    ++samples;
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) ++violations;
  }
};

[[nodiscard]] inline std::string format_reports(std::span<const ProbeReport> reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-44s %9s %10s %14s  %s\n", "probe", "samples", "violations", "worst_margin",
                "status");
  os << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-44s %9zu %10zu %14.6e  %s\n", r.name.c_str(), r.samples, r.violations,
                  r.worst_margin, r.passed() ? "PASS" : "FAIL");
    os << line;
  }
  return os.str();
}

using PointSampler = std::function<DenseVector(std::mt19937_64&)>;

/// Uniform point in center + [-radius, radius]^n, projected onto the feasible
/// set; resampled while any coordinate sits within 1e-12 of zero.
[[nodiscard]] inline PointSampler region_sampler(const ProblemInstance& p) {
  DenseVector center = p.sampling.center.empty() ? DenseVector(p.dim, 0.0) : p.sampling.center;
  const double radius = p.sampling.radius;
  FeasibleSet set = p.feasible;
  return [center = std::move(center), radius, set = std::move(set)](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-radius, radius);
    for (;;) {
      DenseVector u = center;
      for (double& x : u) x += unif(rng);
      u = project(set, u);
      bool kink = false;
      for (double x : u) kink = kink || std::abs(x) < kKinkExclusion;
      if (!kink) return u;
    }
  };
}

/// Max over coordinates of |fd_i - g_i| / max(|g_i|, 1), central differences.
[[nodiscard]] inline double fd_gradient_check(const ProblemInstance& p, const DenseVector& u, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient_check: step must be positive");
  const DenseVector g = eval_gradient(p, u);
  double worst = 0.0;
  DenseVector x = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    x[i] = u[i] + step;
    const double fp = eval_objective(p, x);
    x[i] = u[i] - step;
    const double fm = eval_objective(p, x);
    x[i] = u[i];
    const double fd = (fp - fm) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1.0));
  }
  return worst;
}

/// A sample from the problem's sampling region moved so that every
/// coordinate has |u_i| >= 2 min_abs and lies at least 2 min_abs inside a box.
[[nodiscard]] inline DenseVector kink_free_point(const ProblemInstance& p, double min_abs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DenseVector u = region_sampler(p)(rng);
  const double gap = 2.0 * min_abs;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (p.feasible.is_box()) {
      const double lo = p.feasible.lower()[i], hi = p.feasible.upper()[i];
      if (hi - lo <= 2.0 * gap) throw std::invalid_argument("kink_free_point: box too thin");
      u[i] = std::clamp(u[i], lo + gap, hi - gap);
    }
    if (std::abs(u[i]) < gap) u[i] = u[i] < 0.0 ? -gap : gap;
  }
  if (p.feasible.is_box() && !p.feasible.contains(u, 0.0)) {
    throw std::runtime_error("kink_free_point: no interior kink-free point");
  }
  return u;
}

/// ||grad(u) - grad(v)|| <= L ||u - v||^alpha + 1e-9 on n_pairs sampled pairs.
[[nodiscard]] inline ProbeReport holder_probe(const VectorFn& gradient, double alpha, double L,
                                              const PointSampler& sampler, std::size_t n_pairs,
                                              std::uint64_t seed = 42, std::string name = "holder") {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("holder_probe: alpha must lie in (0, 1]");
  if (!(L > 0.0)) throw std::invalid_argument("holder_probe: L must be positive");
  ProbeReport r;
  r.name = std::move(name);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < n_pairs; ++s) {
    const DenseVector u = sampler(rng);
    const DenseVector v = sampler(rng);
    const double lhs = distance(gradient(u), gradient(v));
    const double rhs = L * std::pow(distance(u, v), alpha) + kProbeSlack;
    r.observe(rhs - lhs);
  }
  return r;
}

/// f(u) >= f(v) + <grad f(v), u - v> + (mu/2)||u - v||^2 - 1e-9.
[[nodiscard]] inline ProbeReport strong_convexity_probe(const ProblemInstance& p, std::size_t n_pairs,
                                                        std::uint64_t seed = 42) {
  ProbeReport r;
  r.name = p.name + ": strong convexity (mu=" + std::to_string(p.mu) + ")";
  std::mt19937_64 rng(seed);
  const auto sample = region_sampler(p);
  for (std::size_t s = 0; s < n_pairs; ++s) {
    const DenseVector u = sample(rng);
    const DenseVector v = sample(rng);
    const DenseVector d = u - v;
    const double lower = eval_objective(p, v) + dot(eval_gradient(p, v), d) + 0.5 * p.mu * norm_squared(d);
    r.observe(eval_objective(p, u) - lower + kProbeSlack);
  }
  return r;
}

/// f(v) <= f(u) + <grad f(u), v - u> + (rho/2)||v - u||^2 + delta/2 + 1e-9 with
/// rho = rho_required(components, delta) unless overridden.
[[nodiscard]] inline ProbeReport inexact_oracle_probe(const ProblemInstance& p, double delta, std::size_t n_pairs,
                                                      std::uint64_t seed = 42,
                                                      std::optional<double> rho_override = std::nullopt) {
  if (!(delta > 0.0)) throw std::invalid_argument("inexact_oracle_probe: delta must be positive");
  const auto metas = p.metas();
  const double rho = rho_override ? *rho_override : rho_required(metas, delta);
  ProbeReport r;
  char buf[96];
  std::snprintf(buf, sizeof buf, ": inexact oracle (delta=%.0e)", delta);
  r.name = p.name + buf;
  std::mt19937_64 rng(seed);
  const auto sample = region_sampler(p);
  for (std::size_t s = 0; s < n_pairs; ++s) {
    const DenseVector u = sample(rng);
    const DenseVector v = sample(rng);
    const DenseVector d = v - u;
    const double upper =
        eval_objective(p, u) + dot(eval_gradient(p, u), d) + 0.5 * rho * norm_squared(d) + 0.5 * delta + kProbeSlack;
    r.observe(upper - eval_objective(p, v));
  }
  return r;
}

/// <grad f(u*), w - u*> >= -1e-8 for random feasible w.
[[nodiscard]] inline ProbeReport first_order_optimality_probe(const ProblemInstance& p, std::size_t n_samples,
                                                              std::uint64_t seed = 42) {
  ProbeReport r;
  r.name = p.name + ": first-order optimality at u*";
  if (!p.minimizer) return r;
  const DenseVector g = eval_gradient(p, *p.minimizer);
  std::mt19937_64 rng(seed);
  const auto sample = region_sampler(p);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const DenseVector w = sample(rng);
    r.observe(dot(g, w - *p.minimizer) + 1e-8);
  }
  return r;
}

/// f = (1/m) sum_i f_i and grad f = (1/m) sum_i grad f_i at sampled points
/// (relative tolerance 1e-10).
[[nodiscard]] inline ProbeReport component_sum_probe(const ProblemInstance& p, std::size_t n_samples,
                                                     std::uint64_t seed = 42) {
  ProbeReport r;
  r.name = p.name + ": components average to f";
  std::mt19937_64 rng(seed);
  const auto sample = region_sampler(p);
  const double m = static_cast<double>(p.components.size());
  for (std::size_t s = 0; s < n_samples; ++s) {
    const DenseVector u = sample(rng);
    double fsum = 0.0;
    DenseVector gsum(u.size(), 0.0);
    for (const auto& c : p.components) {
      fsum += c.value(u);
      gsum = gsum + c.gradient(u);
    }
    const double f = eval_objective(p, u);
    const DenseVector g = eval_gradient(p, u);
    const double f_err = std::abs(fsum / m - f) - 1e-10 * std::max(1.0, std::abs(f));
    const double g_err = distance((1.0 / m) * gsum, g) - 1e-10 * std::max(1.0, norm(g));
    r.observe(-std::max(f_err, g_err));
  }
  return r;
}

/// Every probe that applies to `p`, in a fixed order. The FD check uses a
/// kink-free sample and a relative tolerance of 1e-5.
[[nodiscard]] inline std::vector<ProbeReport> run_validation_suite(const ProblemInstance& p, std::size_t n_pairs,
                                                                   std::uint64_t seed = 42) {
  std::vector<ProbeReport> out;
  {
    const double step = 1e-6;
    const DenseVector u = kink_free_point(p, 1e-3, seed);
    ProbeReport r;
    r.name = p.name + ": finite-difference gradient";
    r.observe(1e-5 - fd_gradient_check(p, u, step));
    out.push_back(r);
  }
  out.push_back(component_sum_probe(p, std::min<std::size_t>(n_pairs, 1000), seed));
  const auto sample = region_sampler(p);
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& c = p.components[i];
    char buf[128];
    std::snprintf(buf, sizeof buf, ": holder f%zu (alpha=%.3g, L=%.6g)", i + 1, c.meta.alpha, c.meta.lipschitz_holder);
    out.push_back(holder_probe(c.gradient, c.meta.alpha, c.meta.lipschitz_holder, sample, n_pairs, seed + 1 + i,
                               p.name + buf));
  }
  out.push_back(strong_convexity_probe(p, n_pairs, seed));
  for (double delta : {1e-1, 1e-2, 1e-3}) out.push_back(inexact_oracle_probe(p, delta, n_pairs, seed));
  if (p.minimizer) out.push_back(first_order_optimality_probe(p, std::min<std::size_t>(n_pairs, 1000), seed));
  return out;
}

// ---------------------------------------------------------------------------
// Estimating-sequence audit
// ---------------------------------------------------------------------------

/// phi_k(u) from the recursive definition: phi_0(u) plus the first k terms.
[[nodiscard]] inline double phi_recursive(const EstimatingAudit& a, std::size_t k, const DenseVector& u) {
  auto sq_dist = [](const DenseVector& x, const DenseVector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s;
  };
  double phi = a.c0 + 0.5 * a.mu * sq_dist(u, a.w0);
  for (std::size_t l = 0; l < k; ++l) {
    const auto& t = a.terms[l];
    double lin = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) lin += t.grad_v[i] * (u[i] - t.v[i]);
    phi += t.weight * (t.f_v - a.f_star + lin + 0.5 * a.mu * sq_dist(u, t.v));
  }
  return phi;
}

/// Four reports: canonical vs recursive phi (relative 1e-8 at n_points random
/// points per iteration), the descent inequality, the error bound and the
/// sigma product. Descent and error bound are checked after dividing by
/// sigma_k, with additive slack 1e-8.
[[nodiscard]] inline std::vector<ProbeReport> estimating_sequence_checks(const EstimatingAudit& a,
                                                                         const ProblemInstance& p,
                                                                         std::size_t n_points = 100,
                                                                         std::uint64_t seed = 42) {
  if (a.snapshots.empty()) throw std::invalid_argument("estimating_sequence_audit: no audit data recorded");
  if (!p.minimizer) throw std::invalid_argument("estimating_sequence_audit: minimizer required");
  if (a.terms.size() + 1 != a.snapshots.size() || a.nus.size() != a.terms.size()) {
    throw std::invalid_argument("estimating_sequence_audit: inconsistent audit data");
  }
  ProbeReport agree{"phi canonical vs recursive (rel 1e-8)"};
  ProbeReport descent{"descent: f(u_k)-f*-mu eps^2/4 <= phi_k(P(w_k))/sigma_k"};
  ProbeReport error{"error: f(u_k)-f* <= phi_0(u*)/sigma_k + mu eps^2/4"};
  ProbeReport sigma{"sigma_k == prod(1 + nu_l)"};

  std::mt19937_64 rng(seed);
  const auto sample = region_sampler(p);
  const double eps2 = a.epsilon * a.epsilon;
  const double phi0_star = phi_recursive(a, 0, *p.minimizer);
  double product = 1.0;
  for (const auto& snap : a.snapshots) {
    const std::size_t k = snap.iter;
    if (k > 0) product *= 1.0 + a.nus[k - 1];
    sigma.observe(product == snap.sigma ? 0.0 : -std::abs(product - snap.sigma));

    EstimatingState st;
    st.sigma = snap.sigma;
    st.c = snap.c;
    st.w = snap.w;
    for (std::size_t q = 0; q < n_points; ++q) {
      const DenseVector u = sample(rng);
      const double canon = phi_eval(st, u, a.mu);
      const double rec = phi_recursive(a, k, u);
      const double scale = std::max({std::abs(canon), std::abs(rec), std::numeric_limits<double>::min()});
      agree.observe(1e-8 * scale - std::abs(canon - rec));
    }

    const double lhs = snap.f_u - a.f_star - a.mu * eps2 / 4.0;
    const double phi_at_pw = phi_eval(st, project(p.feasible, snap.w), a.mu);
    descent.observe(phi_at_pw / snap.sigma + 1e-8 - lhs);
    error.observe(phi0_star / snap.sigma + a.mu * eps2 / 4.0 + 1e-8 - (snap.f_u - a.f_star));
  }
  return {agree, descent, error, sigma};
}

[[nodiscard]] inline ProbeReport estimating_sequence_audit(const EstimatingAudit& a, const ProblemInstance& p,
                                                           std::size_t n_points = 100, std::uint64_t seed = 42) {
  ProbeReport combined{"estimating-sequence audit"};
  combined.samples = 0;
  for (const auto& r : estimating_sequence_checks(a, p, n_points, seed)) {
    combined.samples += r.samples;
    combined.violations += r.violations;
    combined.worst_margin = std::min(combined.worst_margin, r.worst_margin);
  }
  return combined;
}

}  // namespace holder_pg
