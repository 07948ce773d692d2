#pragma once

// Closed-form constants: the exponent floor alpha_hat, the curvature constant M,
// inexact-oracle thresholds, fixed stepsizes and iteration-count predictors.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "holder_pg/core.hpp"

namespace holder_pg {

enum class Algorithm { Pgdm, Upgm, Ufgm, UfgmFixed };

[[nodiscard]] inline const char* to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Pgdm: return "pgdm";
    case Algorithm::Upgm: return "upgm";
    case Algorithm::Ufgm: return "ufgm";
    case Algorithm::UfgmFixed: return "ufgm-fixed";
  }
  return "unknown";
}

[[nodiscard]] inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "pgdm") return Algorithm::Pgdm;
  if (s == "upgm") return Algorithm::Upgm;
  if (s == "ufgm") return Algorithm::Ufgm;
  if (s == "ufgm-fixed") return Algorithm::UfgmFixed;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

[[nodiscard]] inline double alpha_hat(std::span<const ComponentMeta> components) {
  if (components.empty()) throw std::invalid_argument("alpha_hat: empty component list");
  double a = components.front().alpha;
  for (const auto& c : components) a = std::min(a, c.alpha);
  return a;
}

namespace detail {

// [scale * (1-a)/(1+a)]^{(1-a)/(1+a)} * L^{2/(1+a)}, with the a == 1 term
// taken as L exactly (0^0 = 1).
[[nodiscard]] inline double holder_curvature_term(const ComponentMeta& c, double scale) {
  c.validate();
  if (c.alpha == 1.0) return c.lipschitz_holder;
  const double a = c.alpha;
  const double e = (1.0 - a) / (1.0 + a);
  return std::pow(scale * e, e) * std::pow(c.lipschitz_holder, 2.0 / (1.0 + a));
}

}  // namespace detail

/// max_i [2(1-a_i) / (mu (1+a_i))]^{(1-a_i)/(1+a_i)} L_i^{2/(1+a_i)}.
[[nodiscard]] inline double constant_M(std::span<const ComponentMeta> components, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("constant_M: mu must be positive");
  if (components.empty()) throw std::invalid_argument("constant_M: empty component list");
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, detail::holder_curvature_term(c, 2.0 / mu));
  return m;
}

/// Smallest rho for which the quadratic model with additive slack delta/2
/// upper-bounds f (inexact oracle).
[[nodiscard]] inline double rho_required(std::span<const ComponentMeta> components, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("rho_required: delta must be positive");
  if (components.empty()) throw std::invalid_argument("rho_required: empty component list");
  double r = 0.0;
  for (const auto& c : components) r = std::max(r, detail::holder_curvature_term(c, 1.0 / delta));
  return r;
}

/// Exponent 2(1-a)/(1+a) of the fixed-step complexity.
[[nodiscard]] inline double pgdm_exponent(double ah) { return 2.0 * (1.0 - ah) / (1.0 + ah); }
/// Exponent 2(1-a)/(1+3a) of the accelerated complexity.
[[nodiscard]] inline double ufgm_exponent(double ah) { return 2.0 * (1.0 - ah) / (1.0 + 3.0 * ah); }

namespace detail {

inline void check_common(double epsilon, double alpha_hat_value, const char* where) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument(std::string(where) + ": epsilon must lie in (0, 1)");
  if (!(alpha_hat_value > 0.0 && alpha_hat_value <= 1.0)) {
    throw std::invalid_argument(std::string(where) + ": alpha_hat must lie in (0, 1]");
  }
}

}  // namespace detail

/// tau = eps^{2(1-a)/(1+a)} / M.
[[nodiscard]] inline double pgdm_stepsize(double epsilon, double M, double ah) {
  detail::check_common(epsilon, ah, "pgdm_stepsize");
  if (!(M > 0.0)) throw std::invalid_argument("pgdm_stepsize: M must be positive");
  const double tau = std::pow(epsilon, pgdm_exponent(ah)) / M;
  if (!std::isfinite(tau)) throw NumericalError("pgdm_stepsize: non-finite stepsize");
  return tau;
}

/// Fixed UFGM step nu = 2 [mu/(4M)]^{(1+a)/(1+3a)} eps^{2(1-a)/(1+3a)}.
/// Throws ParameterInconsistency when nu > 1.
[[nodiscard]] inline double ufgm_fixed_nu(double epsilon, double M, double mu, double ah) {
  detail::check_common(epsilon, ah, "ufgm_fixed_nu");
  if (!(M > 0.0)) throw std::invalid_argument("ufgm_fixed_nu: M must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("ufgm_fixed_nu: mu must be positive");
  const double nu =
      2.0 * std::pow(mu / (4.0 * M), (1.0 + ah) / (1.0 + 3.0 * ah)) * std::pow(epsilon, ufgm_exponent(ah));
  if (nu > 1.0) {
    throw ParameterInconsistency("ufgm_fixed_nu: nu = " + std::to_string(nu) + " exceeds 1 (mu too large relative to M)");
  }
  return nu;
}

/// omega = 2^{-2/(1+3a)} (mu/M)^{(1+a)/(1+3a)}.
[[nodiscard]] inline double ufgm_omega(double M, double mu, double ah) {
  return std::pow(2.0, -2.0 / (1.0 + 3.0 * ah)) * std::pow(mu / M, (1.0 + ah) / (1.0 + 3.0 * ah));
}

struct ComplexityPrediction {
  Algorithm algorithm = Algorithm::Pgdm;
  double epsilon = 0.0;
  double constant_M = 0.0;
  double alpha_hat = 1.0;
  double predicted_iterations = 0.0;
  double exponent = 0.0;
  std::optional<double> omega;
};

/// Upper bound on the number of iterations to reach ||u_k - u*|| <= eps.
///
/// PGDM and UPGM use the fixed-step bound
///   4 M log((2 M d0^2 / mu)^{(1+a)/4} / eps) / (mu (1+a) eps^{2(1-a)/(1+a)}),
/// UFGM (either variant) uses
///   4 log(sqrt(2 chi) / eps) / (omega eps^{2(1-a)/(1+3a)}),  chi = 2 gap0/mu + d0^2,
/// which needs the initial optimality gap. Natural logarithms throughout.
[[nodiscard]] inline ComplexityPrediction predict_iterations(Algorithm algo, double epsilon, double M, double mu,
                                                             double ah, double d0,
                                                             std::optional<double> gap0 = std::nullopt) {
  detail::check_common(epsilon, ah, "predict_iterations");
  if (!(M > 0.0) || !(mu > 0.0)) throw std::invalid_argument("predict_iterations: M and mu must be positive");
  if (!(d0 > 0.0)) throw std::invalid_argument("predict_iterations: d0 must be positive");

  ComplexityPrediction p;
  p.algorithm = algo;
  p.epsilon = epsilon;
  p.constant_M = M;
  p.alpha_hat = ah;
  if (algo == Algorithm::Pgdm || algo == Algorithm::Upgm) {
    p.exponent = pgdm_exponent(ah);
    const double log_term = std::log(std::pow(2.0 * M * d0 * d0 / mu, (1.0 + ah) / 4.0) / epsilon);
    p.predicted_iterations = 4.0 * M * log_term / (mu * (1.0 + ah) * std::pow(epsilon, p.exponent));
  } else {
    if (!gap0) throw std::invalid_argument("predict_iterations: UFGM bound requires the initial gap f(u0) - f*");
    if (*gap0 < 0.0) throw std::invalid_argument("predict_iterations: negative initial gap");
    p.exponent = ufgm_exponent(ah);
    p.omega = ufgm_omega(M, mu, ah);
    const double chi = 2.0 * *gap0 / mu + d0 * d0;
    p.predicted_iterations = 4.0 * std::log(std::sqrt(2.0 * chi) / epsilon) / (*p.omega * std::pow(epsilon, p.exponent));
  }
  if (!(p.predicted_iterations > 0.0)) {
    throw std::invalid_argument("predict_iterations: bound is not positive (epsilon not small enough for d0)");
  }
  return p;
}

}  // namespace holder_pg
