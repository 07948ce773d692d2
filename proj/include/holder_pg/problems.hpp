#pragma once

// Benchmark instances:
//   example1   - univariate x^2/2 + (2/3)|x|^{3/2},
//   elliptic1  - discretized -Lap u + gamma u_+^alpha with a manufactured solution,
//   elliptic2  - box-constrained semi-linear problem with a concave |u|^{1+p} term,
//   quadratic  - ||u||^2 / 2, the Lipschitz reference case.
//
// Every instance registers components f_i with f = (1/m) sum_i f_i.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holder_pg/core.hpp"
#include "holder_pg/linalg.hpp"

namespace holder_pg {

namespace detail {

[[nodiscard]] inline double sign(double x) { return (x > 0.0) - (x < 0.0); }

/// ||psi(u) - psi(v)||_2 <= c n^{(1-a)/2} ||u - v||^a when |psi(s) - psi(t)| <= c|s - t|^a.
[[nodiscard]] inline double vectorized_holder_constant(double per_coordinate, double alpha, std::size_t n) {
  return per_coordinate * std::pow(static_cast<double>(n), (1.0 - alpha) / 2.0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Example 1
// ---------------------------------------------------------------------------

/// f(x) = x^2/2 + (2/3)|x|^{3/2} with components f1 = x^2 (1, 2) and
/// f2 = (4/3)|x|^{3/2} (1/2, 2 sqrt 2); minimizer 0.
[[nodiscard]] inline ProblemInstance example1() {
  ProblemInstance p;
  p.name = "example1";
  p.dim = 1;
  p.objective = [](const DenseVector& u) {
    const double x = u[0];
    return 0.5 * x * x + (2.0 / 3.0) * std::pow(std::abs(x), 1.5);
  };
  p.gradient = [](const DenseVector& u) {
    const double x = u[0];
    return DenseVector{x + detail::sign(x) * std::sqrt(std::abs(x))};
  };
  p.mu = 1.0;
  p.components.push_back(Component{
      ComponentMeta(1.0, 2.0), [](const DenseVector& u) { return u[0] * u[0]; },
      [](const DenseVector& u) { return DenseVector{2.0 * u[0]}; }});
  p.components.push_back(Component{
      ComponentMeta(0.5, 2.0 * std::numbers::sqrt2),
      [](const DenseVector& u) { return (4.0 / 3.0) * std::pow(std::abs(u[0]), 1.5); },
      [](const DenseVector& u) { return DenseVector{2.0 * detail::sign(u[0]) * std::sqrt(std::abs(u[0]))}; }});
  p.feasible = FeasibleSet::whole_space(1);
  p.minimizer = DenseVector{0.0};
  p.optimal_value = 0.0;
  p.initial = DenseVector{1.0};
  p.sampling = SamplingRegion{DenseVector{0.0}, 10.0};
  return p;
}

/// f(u) = ||u||^2 / 2 on R^n: alpha_hat = 1, M = L = mu = 1.
[[nodiscard]] inline ProblemInstance quadratic(std::size_t dim = 1) {
  ProblemInstance p;
  p.name = "quadratic";
  p.dim = dim;
  p.objective = [](const DenseVector& u) { return 0.5 * norm_squared(u); };
  p.gradient = [](const DenseVector& u) { return u; };
  p.mu = 1.0;
  p.components.push_back(Component{ComponentMeta(1.0, 1.0), p.objective, p.gradient});
  p.feasible = FeasibleSet::whole_space(dim);
  p.minimizer = DenseVector(dim, 0.0);
  p.optimal_value = 0.0;
  p.initial = DenseVector(dim, 1.0);
  p.sampling = SamplingRegion{DenseVector(dim, 0.0), 10.0};
  return p;
}

// ---------------------------------------------------------------------------
// Grid helpers
// ---------------------------------------------------------------------------

/// Manufactured solution ((3r - 1)/2)^2 max(0, r - 1/3), r = sqrt(x^2 + y^2).
[[nodiscard]] inline double manufactured_solution(double x, double y) {
  const double r = std::hypot(x, y);
  const double a = (3.0 * r - 1.0) / 2.0;
  return a * a * std::max(0.0, r - 1.0 / 3.0);
}

/// Samples the manufactured solution at the interior grid points.
[[nodiscard]] inline DenseVector exact_solution_grid(double h) {
  const auto grid = UnitSquareGrid::from_width(h);
  const double hh = grid.h();
  std::vector<double> out(grid.size());
  for (std::size_t j = 1; j <= grid.side(); ++j) {
    for (std::size_t i = 1; i <= grid.side(); ++i) {
      out[grid.index(i, j)] = manufactured_solution(static_cast<double>(i) * hh, static_cast<double>(j) * hh);
    }
  }
  return DenseVector(std::move(out));
}

using BoundaryFn = std::function<double(double, double)>;

/// Right-hand side that moves Dirichlet data g into the five-point system:
/// each interior point collects g at its boundary neighbours, scaled by 1/h^2.
[[nodiscard]] inline DenseVector dirichlet_rhs(double h, const BoundaryFn& g) {
  const auto grid = UnitSquareGrid::from_width(h);
  const double hh = grid.h();
  const double scale = 1.0 / (hh * hh);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t j = 1; j <= grid.side(); ++j) {
    for (std::size_t i = 1; i <= grid.side(); ++i) {
      double s = 0.0;
      const std::size_t nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nb) {
        if (grid.is_boundary(q[0], q[1])) s += g(static_cast<double>(q[0]) * hh, static_cast<double>(q[1]) * hh);
      }
      out[grid.index(i, j)] = s * scale;
    }
  }
  return DenseVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Elliptic problem with a non-Lipschitz reaction term
// ---------------------------------------------------------------------------

enum class Elliptic1Mu { TwoPiSquared, DiscreteLambdaMin };

struct Elliptic1Spec {
  double h = 0.0625;
  double gamma = 0.5;
  double alpha = 0.5;
  SparseMatrix A;
  DenseVector b;
  DenseVector u_star;
  DenseVector c_star;
  ExtremeEigenvalues eigs;

  [[nodiscard]] std::size_t n() const noexcept { return A.n; }
  /// Hölder constant of u -> 2 gamma u_+^alpha per coordinate.
  [[nodiscard]] double coordinatewise_l2() const noexcept { return 2.0 * gamma; }
};

/// A u* + gamma (u*)_+^alpha - b.
[[nodiscard]] inline DenseVector elliptic1_c_star(const SparseMatrix& A, const DenseVector& b,
                                                  const DenseVector& u_star, double gamma, double alpha) {
  DenseVector c = matvec(A, u_star);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += gamma * std::pow(std::max(u_star[i], 0.0), alpha) - b[i];
  return c;
}

[[nodiscard]] inline Elliptic1Spec make_elliptic1_spec(double h, double gamma, double alpha) {
  if (!(gamma > 0.0)) throw std::invalid_argument("elliptic1: gamma must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("elliptic1: alpha must lie in (0, 1)");
  Elliptic1Spec s;
  s.h = h;
  s.gamma = gamma;
  s.alpha = alpha;
  s.A = build_laplacian_2d(h);
  s.b = dirichlet_rhs(h, manufactured_solution);
  s.u_star = exact_solution_grid(h);
  s.c_star = elliptic1_c_star(s.A, s.b, s.u_star, gamma, alpha);
  s.eigs = laplacian_extreme_eigs(h);
  return s;
}

/// f(u) = u^T A u / 2 + gamma/(1+alpha) e^T u_+^{1+alpha} - (b + c*)^T u, with
/// f1 = u^T A u - 2(b + c*)^T u and f2 = 2 gamma/(1+alpha) e^T u_+^{1+alpha}.
[[nodiscard]] inline ProblemInstance elliptic1(const Elliptic1Spec& spec, Elliptic1Mu mu_choice = Elliptic1Mu::TwoPiSquared) {
  auto s = std::make_shared<const Elliptic1Spec>(spec);
  const std::size_t n = s->n();
  auto lin = std::make_shared<const DenseVector>(s->b + s->c_star);

  auto pos_pow = [](double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; };

  ProblemInstance p;
  p.name = "elliptic1";
  p.dim = n;
  p.objective = [s, lin, pos_pow](const DenseVector& u) {
    const double a = s->alpha;
    double nl = 0.0;
    for (double x : u) nl += pos_pow(x, 1.0 + a);
    return 0.5 * dot(u, matvec(s->A, u)) + s->gamma / (1.0 + a) * nl - dot(*lin, u);
  };
  p.gradient = [s, lin, pos_pow](const DenseVector& u) {
    DenseVector g = matvec(s->A, u);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += s->gamma * pos_pow(u[i], s->alpha) - (*lin)[i];
    return g;
  };
  p.mu = mu_choice == Elliptic1Mu::TwoPiSquared ? 2.0 * std::numbers::pi * std::numbers::pi : s->eigs.lambda_min;

  p.components.push_back(Component{
      ComponentMeta(1.0, 2.0 * s->eigs.lambda_max),
      [s, lin](const DenseVector& u) { return dot(u, matvec(s->A, u)) - 2.0 * dot(*lin, u); },
      [s, lin](const DenseVector& u) { return lincomb(2.0, matvec(s->A, u), -2.0, *lin); }});
  p.components.push_back(Component{
      ComponentMeta(s->alpha, detail::vectorized_holder_constant(s->coordinatewise_l2(), s->alpha, n)),
      [s, pos_pow](const DenseVector& u) {
        double t = 0.0;
        for (double x : u) t += pos_pow(x, 1.0 + s->alpha);
        return 2.0 * s->gamma / (1.0 + s->alpha) * t;
      },
      [s, pos_pow](const DenseVector& u) {
        DenseVector g(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = 2.0 * s->gamma * pos_pow(u[i], s->alpha);
        return g;
      }});

  p.feasible = FeasibleSet::whole_space(n);
  p.minimizer = s->u_star;
  p.optimal_value = p.objective(s->u_star);
  p.initial = cg_solve(s->A, s->b, 1e-10, 10 * n);
  p.sampling = SamplingRegion{*p.initial, 1.0};
  return p;
}

[[nodiscard]] inline ProblemInstance elliptic1(double h, double gamma, double alpha,
                                               Elliptic1Mu mu_choice = Elliptic1Mu::TwoPiSquared) {
  return elliptic1(make_elliptic1_spec(h, gamma, alpha), mu_choice);
}

// ---------------------------------------------------------------------------
// Box-constrained semi-linear elliptic problem
// ---------------------------------------------------------------------------

/// Boundary data 0.5 - sin(x) sin(y).
[[nodiscard]] inline double elliptic2_boundary(double x, double y) { return 0.5 - std::sin(x) * std::sin(y); }

struct Elliptic2Spec {
  double h = 0.0625;
  double alpha = 0.5;
  double p = 1.5;
  double delta = 20.0;
  SparseMatrix A;
  DenseVector b;
  ExtremeEigenvalues eigs;
  FeasibleSet box = FeasibleSet::whole_space(1);

  [[nodiscard]] std::size_t n() const noexcept { return A.n; }
  /// Hölder constant of u -> 2 delta |u|^alpha sign(u) per coordinate.
  [[nodiscard]] double coordinatewise_l2() const { return 2.0 * delta * std::pow(2.0, 1.0 - alpha); }
};

[[nodiscard]] inline Elliptic2Spec make_elliptic2_spec(double h, double alpha, double p, double delta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("elliptic2: alpha must lie in (0, 1)");
  if (!(p > 1.0)) throw std::invalid_argument("elliptic2: p must exceed 1");
  if (!(delta > p / alpha)) {
    throw ConstraintViolation("elliptic2: strong convexity needs delta > p/alpha (delta = " + std::to_string(delta) +
                              ", p/alpha = " + std::to_string(p / alpha) + ")");
  }
  Elliptic2Spec s;
  s.h = h;
  s.alpha = alpha;
  s.p = p;
  s.delta = delta;
  s.A = build_laplacian_2d(h);
  s.b = dirichlet_rhs(h, elliptic2_boundary);
  s.eigs = laplacian_extreme_eigs(h);
  s.box = FeasibleSet::uniform_box(s.A.n, -1.0, 1.0);
  return s;
}

/// A u + delta |u|^alpha sign(u) - |u|^{p-1} u - b.
[[nodiscard]] inline DenseVector elliptic2_gradient(const Elliptic2Spec& s, const DenseVector& u) {
  DenseVector g = matvec(s.A, u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::abs(u[i]);
    g[i] += s.delta * std::pow(a, s.alpha) * detail::sign(u[i]) - std::pow(a, s.p - 1.0) * u[i] - s.b[i];
  }
  return g;
}

/// ||u - P_U(u - tau grad f(u))||, the fixed-point residual of the projected
/// gradient map.
[[nodiscard]] inline double residual_norm(const Elliptic2Spec& s, const DenseVector& u, double tau) {
  if (u.size() != s.n()) throw std::invalid_argument("residual_norm: dimension mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("residual_norm: tau must be positive");
  const DenseVector step = project(s.box, lincomb(1.0, u, -tau, elliptic2_gradient(s, u)));
  return distance(u, step);
}

/// f(u) = u^T A u / 2 + delta/(1+alpha) e^T|u|^{1+alpha} - 1/(1+p) e^T|u|^{1+p} - b^T u on [-1, 1]^n.
[[nodiscard]] inline ProblemInstance elliptic2(const Elliptic2Spec& spec) {
  auto s = std::make_shared<const Elliptic2Spec>(spec);
  const std::size_t n = s->n();

  ProblemInstance p;
  p.name = "elliptic2";
  p.dim = n;
  p.objective = [s](const DenseVector& u) {
    double t = 0.0;
    for (double x : u) {
      const double a = std::abs(x);
      t += s->delta / (1.0 + s->alpha) * std::pow(a, 1.0 + s->alpha) - std::pow(a, 1.0 + s->p) / (1.0 + s->p);
    }
    return 0.5 * dot(u, matvec(s->A, u)) + t - dot(s->b, u);
  };
  p.gradient = [s](const DenseVector& u) { return elliptic2_gradient(*s, u); };
  p.mu = s->eigs.lambda_min;

  p.components.push_back(Component{
      ComponentMeta(1.0, 2.0 * s->eigs.lambda_max + 2.0 * s->p),
      [s](const DenseVector& u) {
        double t = 0.0;
        for (double x : u) t += std::pow(std::abs(x), 1.0 + s->p);
        return dot(u, matvec(s->A, u)) - 2.0 * dot(s->b, u) - 2.0 / (1.0 + s->p) * t;
      },
      [s](const DenseVector& u) {
        DenseVector g = lincomb(2.0, matvec(s->A, u), -2.0, s->b);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= 2.0 * std::pow(std::abs(u[i]), s->p - 1.0) * u[i];
        return g;
      }});
  p.components.push_back(Component{
      ComponentMeta(s->alpha, detail::vectorized_holder_constant(s->coordinatewise_l2(), s->alpha, n)),
      [s](const DenseVector& u) {
        double t = 0.0;
        for (double x : u) t += std::pow(std::abs(x), 1.0 + s->alpha);
        return 2.0 * s->delta / (1.0 + s->alpha) * t;
      },
      [s](const DenseVector& u) {
        DenseVector g(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
          g[i] = 2.0 * s->delta * std::pow(std::abs(u[i]), s->alpha) * detail::sign(u[i]);
        }
        return g;
      }});

  p.feasible = s->box;
  p.initial = project(s->box, cg_solve(s->A, s->b, 1e-10, 10 * n));
  p.residual = [s](const DenseVector& u, double tau) { return residual_norm(*s, u, tau); };
  p.sampling = SamplingRegion{*p.initial, 1.0};
  return p;
}

[[nodiscard]] inline ProblemInstance elliptic2(double h, double alpha, double p, double delta) {
  return elliptic2(make_elliptic2_spec(h, alpha, p, delta));
}

}  // namespace holder_pg
