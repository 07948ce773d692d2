#pragma once

// Projected gradient methods for strongly convex objectives whose components
// have Hölder-continuous gradients:
//   pgdm  - fixed stepsize with best-so-far iterate,
//   upgm  - universal primal method (doubling line search, rho never decreases),
//   ufgm  - universal fast method, line-search or fixed-nu variant, with an
//           optional estimating-sequence audit.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holder_pg/core.hpp"
#include "holder_pg/stepsize.hpp"

namespace holder_pg {

/// Read-only view of the vectors produced in one iteration, passed to an
/// optional observer. Pointers are null when the method has no such vector.
struct IterateView {
  std::size_t k = 0;               // iteration that produced u_next
  const DenseVector* u_next = nullptr;
  const DenseVector* v = nullptr;  // PGDM/UPGM: v_{k+1}; UFGM: v_k
  const DenseVector* z = nullptr;  // UFGM only
  const DenseVector* w = nullptr;  // UFGM only, w_{k+1} (may be infeasible)
  double nu = 0.0;                 // UFGM only
  double step = 0.0;               // stepsize actually used (tau, 1/rho or nu)
};

using IterateObserver = std::function<void(const IterateView&)>;

struct SolverConfig {
  double epsilon = 1e-2;
  std::size_t max_iters = 10000;
  double rho0 = 1.0;
  /// tau for PGDM, nu for fixed-step UFGM.
  std::optional<double> fixed_step;
  std::optional<double> mu_override;
  /// Stepsize in the residual column; defaults to the step each method uses.
  std::optional<double> residual_step;
  std::size_t record_every = 1;
  /// UFGM only; requires problem.optimal_value.
  bool audit_estimating = false;
  /// Stop once the accuracy target is met (distance when u* is known,
  /// otherwise f - f* <= mu eps^2 / 2 when f* is known).
  bool stop_at_target = true;
  std::optional<DenseVector> initial;
  IterateObserver observer;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("SolverConfig: epsilon must lie in (0, 1)");
    if (max_iters == 0) throw std::invalid_argument("SolverConfig: max_iters must be positive");
    if (!(rho0 > 0.0) || !std::isfinite(rho0)) throw std::invalid_argument("SolverConfig: rho0 must be positive");
    if (record_every == 0) throw std::invalid_argument("SolverConfig: record_every must be positive");
    if (fixed_step && (!(*fixed_step > 0.0) || !std::isfinite(*fixed_step))) {
      throw std::invalid_argument("SolverConfig: fixed_step must be positive");
    }
    if (mu_override && !(*mu_override > 0.0)) throw std::invalid_argument("SolverConfig: mu_override must be positive");
    if (residual_step && !(*residual_step > 0.0)) {
      throw std::invalid_argument("SolverConfig: residual_step must be positive");
    }
  }
};

inline constexpr int kMaxDoublings = 200;

// ---------------------------------------------------------------------------
// Line-search predicates
// ---------------------------------------------------------------------------

/// f(v_next) <= f(v) + <g, v_next - v> + (rho/2)||v_next - v||^2 + mu eps^2 / 4.
[[nodiscard]] inline bool upgm_condition_holds(double f_v, const DenseVector& grad_v, const DenseVector& v_next,
                                               const DenseVector& v, double rho, double mu, double epsilon,
                                               double f_vnext) {
  const DenseVector d = v_next - v;
  return f_vnext <= f_v + dot(grad_v, d) + 0.5 * rho * norm_squared(d) + mu * epsilon * epsilon / 4.0;
}

/// f(u_next) <= f(v) + <g, u_next - v> + mu/(2 nu^2)||u_next - v||^2 + eta mu eps^2 / 4.
[[nodiscard]] inline bool ufgm_condition_holds(double f_v, const DenseVector& grad_v, const DenseVector& u_next,
                                               const DenseVector& v, double nu, double eta, double mu, double epsilon,
                                               double f_unext) {
  const DenseVector d = u_next - v;
  return f_unext <=
         f_v + dot(grad_v, d) + mu / (2.0 * nu * nu) * norm_squared(d) + eta * mu * epsilon * epsilon / 4.0;
}

// ---------------------------------------------------------------------------
// Estimating sequence
// ---------------------------------------------------------------------------

/// One term nu_l sigma_l [f(v_l) - f* + <g_l, u - v_l> + (mu/2)||u - v_l||^2]
/// of the recursive definition of phi_k.
struct EstimatingTerm {
  double weight = 0.0;  // nu_l * sigma_l
  DenseVector v;
  double f_v = 0.0;
  DenseVector grad_v;
};

/// phi_k(u) = c + (sigma mu / 2)||u - w||^2 plus the recursion history that
/// generated it.
struct EstimatingState {
  double sigma = 1.0;
  double c = 0.0;
  DenseVector w;
  std::vector<EstimatingTerm> history;
};

/// phi_0 with c_0 = f(u_0) - f* - mu eps^2 / 4 and w_0 = u_0.
[[nodiscard]] inline EstimatingState estimating_init(const DenseVector& w0, double f_u0, double f_star, double mu,
                                                     double epsilon) {
  EstimatingState s;
  s.sigma = 1.0;
  s.c = f_u0 - f_star - mu * epsilon * epsilon / 4.0;
  s.w = w0;
  return s;
}

[[nodiscard]] inline EstimatingState estimating_update(EstimatingState state, double nu, const DenseVector& v,
                                                       double f_v, const DenseVector& grad_v, double f_star,
                                                       double mu) {
  if (!(nu > 0.0)) throw std::invalid_argument("estimating_update: nu must be positive");
  const double eta = nu / (1.0 + nu);
  const double sigma = state.sigma;
  const double weight = nu * sigma;

  DenseVector w_next = lincomb(1.0 - eta, state.w, eta, v);
  w_next = lincomb(1.0, w_next, -eta / mu, grad_v);

  // phi_{k+1}(w_next) through the canonical form of phi_k plus the new term.
  const double c_next = state.c + 0.5 * sigma * mu * norm_squared(w_next - state.w) + weight * (f_v - f_star) +
                        weight * dot(grad_v, w_next - v) + 0.5 * weight * mu * norm_squared(w_next - v);

  state.history.push_back(EstimatingTerm{weight, v, f_v, grad_v});
  state.sigma = (1.0 + nu) * sigma;
  state.c = c_next;
  state.w = std::move(w_next);
  return state;
}

[[nodiscard]] inline double phi_eval(const EstimatingState& state, const DenseVector& u, double mu) {
  return state.c + 0.5 * state.sigma * mu * norm_squared(u - state.w);
}

/// State of the estimating sequence after iteration k (history omitted; it
/// is the first k terms of EstimatingAudit::terms).
struct AuditSnapshot {
  std::size_t iter = 0;
  double sigma = 1.0;
  double c = 0.0;
  DenseVector w;
  double f_u = 0.0;
};

/// Everything needed to re-check the estimating-sequence inequalities after a
/// UFGM run.
struct EstimatingAudit {
  double mu = 0.0;
  double epsilon = 0.0;
  double f_star = 0.0;
  double c0 = 0.0;
  DenseVector w0;
  std::vector<double> nus;  // nu_0, nu_1, ...
  std::vector<EstimatingTerm> terms;
  std::vector<AuditSnapshot> snapshots;  // one per iteration, starting at k = 0
};

// ---------------------------------------------------------------------------
// Shared run bookkeeping
// ---------------------------------------------------------------------------

namespace detail {

class RunRecorder {
 public:
  RunRecorder(const ProblemInstance& p, const SolverConfig& cfg, double mu)
      : problem_(p), cfg_(cfg), mu_(mu), start_(std::chrono::steady_clock::now()) {}

  [[nodiscard]] bool target_reached(const DenseVector& u, double f_u) const {
    if (!cfg_.stop_at_target) return false;
    if (problem_.minimizer) return distance(u, *problem_.minimizer) <= cfg_.epsilon;
    if (problem_.optimal_value) return f_u - *problem_.optimal_value <= mu_ * cfg_.epsilon * cfg_.epsilon / 2.0;
    return false;
  }

  void record(std::size_t k, const DenseVector& u, double f_u, std::optional<double> rho, std::optional<int> trials,
              double residual_step) {
    IterationRecord r;
    r.iter = k;
    r.f_value = f_u;
    if (problem_.minimizer) r.dist_to_min = distance(u, *problem_.minimizer);
    if (problem_.residual) r.residual = problem_.residual(u, cfg_.residual_step.value_or(residual_step));
    r.rho = rho;
    r.ls_trials = trials;
    trace_.append(std::move(r));
  }

  /// Records iteration k when it falls on the decimation grid or is final.
  void maybe_record(std::size_t k, bool final, const DenseVector& u, double f_u, std::optional<double> rho,
                    std::optional<int> trials, double residual_step) {
    if (k % cfg_.record_every == 0 || final) record(k, u, f_u, rho, trials, residual_step);
  }

  void add_trials(int n) { trace_.summary.total_ls_trials += n; }

  SolverTrace finish(std::size_t iterations, bool hit, DenseVector u) {
    trace_.summary.iterations = iterations;
    trace_.summary.stop = hit ? StopReason::TargetReached : StopReason::MaxIterations;
    trace_.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    trace_.final_iterate = std::move(u);
    return std::move(trace_);
  }

  SolverTrace& trace() { return trace_; }

 private:
  const ProblemInstance& problem_;
  const SolverConfig& cfg_;
  double mu_;
  std::chrono::steady_clock::time_point start_;
  SolverTrace trace_;
};

inline DenseVector starting_point(const ProblemInstance& p, const SolverConfig& cfg) {
  DenseVector u0 = cfg.initial ? project(p.feasible, *cfg.initial) : default_initial(p);
  if (u0.size() != p.dim) throw std::invalid_argument("starting point has wrong dimension");
  return u0;
}

inline double effective_mu(const ProblemInstance& p, const SolverConfig& cfg) {
  return cfg.mu_override ? *cfg.mu_override : p.mu;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PGDM
// ---------------------------------------------------------------------------

/// Stepsize PGDM would use for (problem, cfg).
[[nodiscard]] inline double pgdm_effective_stepsize(const ProblemInstance& problem, const SolverConfig& cfg) {
  if (cfg.fixed_step) return *cfg.fixed_step;
  const auto metas = problem.metas();
  const double mu = detail::effective_mu(problem, cfg);
  return pgdm_stepsize(cfg.epsilon, constant_M(metas, mu), alpha_hat(metas));
}

[[nodiscard]] inline SolverTrace pgdm(const ProblemInstance& problem, const SolverConfig& cfg) {
  problem.validate();
  cfg.validate();
  const double mu = detail::effective_mu(problem, cfg);
  const double tau = pgdm_effective_stepsize(problem, cfg);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw NumericalError("pgdm: non-finite stepsize");

  detail::RunRecorder rec(problem, cfg, mu);
  DenseVector v = detail::starting_point(problem, cfg);
  DenseVector u = v;
  double f_u = eval_objective(problem, u);
  double f_v = f_u;

  bool hit = rec.target_reached(u, f_u);
  rec.record(0, u, f_u, std::nullopt, std::nullopt, tau);
  std::size_t k = 0;
  while (!hit && k < cfg.max_iters) {
    const DenseVector g = eval_gradient(problem, v);
    v = project(problem.feasible, lincomb(1.0, v, -tau, g));
    f_v = eval_objective(problem, v);
    if (f_v <= f_u) {
      u = v;
      f_u = f_v;
    }
    ++k;
    if (cfg.observer) cfg.observer(IterateView{k - 1, &u, &v, nullptr, nullptr, 0.0, tau});
    hit = rec.target_reached(u, f_u);
    rec.maybe_record(k, hit || k == cfg.max_iters, u, f_u, std::nullopt, std::nullopt, tau);
  }
  return rec.finish(k, hit, std::move(u));
}

// ---------------------------------------------------------------------------
// UPGM
// ---------------------------------------------------------------------------

[[nodiscard]] inline SolverTrace upgm(const ProblemInstance& problem, const SolverConfig& cfg) {
  problem.validate();
  cfg.validate();
  const double mu = detail::effective_mu(problem, cfg);

  detail::RunRecorder rec(problem, cfg, mu);
  DenseVector v = detail::starting_point(problem, cfg);
  DenseVector u = v;
  double f_v = eval_objective(problem, v);
  double f_u = f_v;
  double rho = cfg.rho0;

  bool hit = rec.target_reached(u, f_u);
  rec.record(0, u, f_u, rho, std::nullopt, 1.0 / rho);
  std::size_t k = 0;
  while (!hit && k < cfg.max_iters) {
    const DenseVector g = eval_gradient(problem, v);
    DenseVector v_next;
    double f_next = 0.0;
    double rho_trial = rho;
    int j = 0;
    for (;; ++j) {
      if (j > kMaxDoublings) {
        throw RunawayLineSearch("upgm: line search exceeded " + std::to_string(kMaxDoublings) +
                                " doublings at iteration " + std::to_string(k));
      }
      rho_trial = std::ldexp(rho, j);
      v_next = project(problem.feasible, lincomb(1.0, v, -1.0 / rho_trial, g));
      f_next = eval_objective(problem, v_next);
      if (upgm_condition_holds(f_v, g, v_next, v, rho_trial, mu, cfg.epsilon, f_next)) break;
    }
    rho = rho_trial;
    rec.add_trials(j + 1);
    v = std::move(v_next);
    f_v = f_next;
    if (f_v <= f_u) {
      u = v;
      f_u = f_v;
    }
    ++k;
    if (cfg.observer) cfg.observer(IterateView{k - 1, &u, &v, nullptr, nullptr, 0.0, 1.0 / rho});
    hit = rec.target_reached(u, f_u);
    rec.maybe_record(k, hit || k == cfg.max_iters, u, f_u, rho, j + 1, 1.0 / rho);
  }
  return rec.finish(k, hit, std::move(u));
}

// ---------------------------------------------------------------------------
// UFGM
// ---------------------------------------------------------------------------

/// Universal fast gradient method. With cfg.fixed_step the line search and
/// rho bookkeeping are skipped and nu is held constant; the trace then
/// reports rho = mu / nu^2, the curvature that nu corresponds to.
[[nodiscard]] inline SolverTrace ufgm(const ProblemInstance& problem, const SolverConfig& cfg) {
  problem.validate();
  cfg.validate();
  const double mu = detail::effective_mu(problem, cfg);
  const bool fixed = cfg.fixed_step.has_value();
  if (fixed && *cfg.fixed_step > 1.0) {
    throw ParameterInconsistency("ufgm: fixed nu = " + std::to_string(*cfg.fixed_step) + " exceeds 1");
  }
  if (cfg.audit_estimating && !problem.optimal_value) {
    throw std::invalid_argument("ufgm: estimating-sequence audit requires the optimal value f*");
  }

  // nu_k <= 1 needs rho_k >= mu; a smaller rho0 is doubled up front.
  double rho = cfg.rho0;
  while (!fixed && rho < mu) rho *= 2.0;

  detail::RunRecorder rec(problem, cfg, mu);
  DenseVector u = detail::starting_point(problem, cfg);
  DenseVector w = u;
  double f_u = eval_objective(problem, u);

  std::shared_ptr<EstimatingAudit> audit;
  EstimatingState est;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  auto check_descent = [&](std::size_t k) {
    const double f_star = *problem.optimal_value;
    const double lhs = f_u - f_star - mu * eps2 / 4.0;
    const double rhs = phi_eval(est, project(problem.feasible, est.w), mu) / est.sigma;
    if (lhs > rhs + 1e-8) {
      throw AuditFailure("ufgm: descent inequality violated at iteration " + std::to_string(k) + " (" +
                         std::to_string(lhs) + " > " + std::to_string(rhs) + ")");
    }
  };
  if (cfg.audit_estimating) {
    audit = std::make_shared<EstimatingAudit>();
    audit->mu = mu;
    audit->epsilon = cfg.epsilon;
    audit->f_star = *problem.optimal_value;
    est = estimating_init(w, f_u, audit->f_star, mu, cfg.epsilon);
    audit->c0 = est.c;
    audit->w0 = est.w;
    audit->snapshots.push_back(AuditSnapshot{0, est.sigma, est.c, est.w, f_u});
    check_descent(0);
  }

  const double nu_fixed = fixed ? *cfg.fixed_step : 0.0;
  double nu_last = fixed ? nu_fixed : std::sqrt(mu / rho);
  auto rho_report = [&]() { return fixed ? mu / (nu_fixed * nu_fixed) : rho; };

  bool hit = rec.target_reached(u, f_u);
  rec.record(0, u, f_u, rho_report(), std::nullopt, nu_last);
  std::size_t k = 0;
  while (!hit && k < cfg.max_iters) {
    const DenseVector pw = project(problem.feasible, w);
    DenseVector v, z, u_next, g;
    double f_v = 0.0, f_next = 0.0, nu = nu_fixed, eta = 0.0, rho_trial = rho;
    int j = 0;
    for (;; ++j) {
      if (j > kMaxDoublings) {
        throw RunawayLineSearch("ufgm: line search exceeded " + std::to_string(kMaxDoublings) +
                                " doublings at iteration " + std::to_string(k));
      }
      if (!fixed) {
        rho_trial = std::ldexp(rho, j);
        nu = std::sqrt(mu / rho_trial);
      }
      eta = nu / (1.0 + nu);
      v = lincomb(1.0 - eta, u, eta, pw);
      f_v = eval_objective(problem, v);
      g = eval_gradient(problem, v);
      z = project(problem.feasible, lincomb(1.0, pw, -nu / mu, g));
      u_next = lincomb(1.0 - eta, u, eta, z);
      f_next = eval_objective(problem, u_next);
      if (fixed || ufgm_condition_holds(f_v, g, u_next, v, nu, eta, mu, cfg.epsilon, f_next)) break;
    }
    if (!fixed) {
      rho = rho_trial;
      rec.add_trials(j + 1);
    }
    nu_last = nu;

    w = lincomb(1.0 - eta, w, eta, v);
    w = lincomb(1.0, w, -eta / mu, g);
    u = std::move(u_next);
    f_u = f_next;
    ++k;

    if (audit) {
      est = estimating_update(std::move(est), nu, v, f_v, g, audit->f_star, mu);
      audit->nus.push_back(nu);
      audit->terms.push_back(est.history.back());
      audit->snapshots.push_back(AuditSnapshot{k, est.sigma, est.c, est.w, f_u});
      check_descent(k);
    }
    if (cfg.observer) cfg.observer(IterateView{k - 1, &u, &v, &z, &w, nu, nu});

    hit = rec.target_reached(u, f_u);
    rec.maybe_record(k, hit || k == cfg.max_iters, u, f_u, rho_report(),
                     fixed ? std::nullopt : std::optional<int>(j + 1), nu);
  }
  SolverTrace trace = rec.finish(k, hit, std::move(u));
  trace.audit = std::move(audit);
  return trace;
}

/// Dispatches on the algorithm tag; UfgmFixed requires cfg.fixed_step.
[[nodiscard]] inline SolverTrace solve(Algorithm algo, const ProblemInstance& problem, const SolverConfig& cfg) {
  switch (algo) {
    case Algorithm::Pgdm: return pgdm(problem, cfg);
    case Algorithm::Upgm: return upgm(problem, cfg);
    case Algorithm::Ufgm: {
      if (cfg.fixed_step) {
        SolverConfig c = cfg;
        c.fixed_step.reset();
        return ufgm(problem, c);
      }
      return ufgm(problem, cfg);
    }
    case Algorithm::UfgmFixed:
      if (!cfg.fixed_step) throw std::invalid_argument("ufgm-fixed requires a fixed nu");
      return ufgm(problem, cfg);
  }
  throw std::invalid_argument("solve: unknown algorithm");
}

}  // namespace holder_pg
