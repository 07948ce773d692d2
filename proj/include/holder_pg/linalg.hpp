#pragma once

// Five-point Laplacian on the unit square, CSR products and unpreconditioned CG.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holder_pg/core.hpp"

namespace holder_pg {

/// Square matrix in compressed sparse row storage; column indices are sorted
/// within each row.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_offsets;  // size n + 1
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  [[nodiscard]] std::size_t nnz() const noexcept { return values.size(); }

  /// Entry (i, j), zero when not stored.
  [[nodiscard]] double at(std::size_t i, std::size_t j) const {
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] == j) return values[k];
    }
    return 0.0;
  }

  [[nodiscard]] bool is_structurally_symmetric() const {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
        if (at(col_indices[k], i) != values[k]) return false;
      }
    }
    return true;
  }
};

/// Uniform mesh on [0,1]^2 with width 1/cells; interior points are (i*h, j*h),
/// 1 <= i, j <= cells-1, ordered row by row (i fastest).
struct UnitSquareGrid {
  std::size_t cells = 0;

  [[nodiscard]] static UnitSquareGrid from_width(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("mesh width must be positive");
    const double inv = 1.0 / h;
    const double k = std::round(inv);
    if (k < 2.0 || std::abs(inv - k) > 1e-9 * k) {
      throw std::invalid_argument("mesh width must be 1/k for an integer k >= 2, got h = " + std::to_string(h));
    }
    return UnitSquareGrid{static_cast<std::size_t>(k)};
  }

  [[nodiscard]] double h() const noexcept { return 1.0 / static_cast<double>(cells); }
  [[nodiscard]] std::size_t side() const noexcept { return cells - 1; }
  [[nodiscard]] std::size_t size() const noexcept { return side() * side(); }
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept { return (j - 1) * side() + (i - 1); }
  [[nodiscard]] bool is_boundary(std::size_t i, std::size_t j) const noexcept {
    return i == 0 || j == 0 || i == cells || j == cells;
  }
};

[[nodiscard]] inline SparseMatrix build_laplacian_2d(double h) {
  const auto grid = UnitSquareGrid::from_width(h);
  const double hh = grid.h();
  const double diag = 4.0 / (hh * hh);
  const double off = -1.0 / (hh * hh);
  const std::size_t side = grid.side();

  SparseMatrix a;
  a.n = grid.size();
  a.row_offsets.reserve(a.n + 1);
  a.row_offsets.push_back(0);
  for (std::size_t j = 1; j <= side; ++j) {
    for (std::size_t i = 1; i <= side; ++i) {
      // Emitted in increasing column order: south, west, self, east, north.
      if (j > 1) {
        a.col_indices.push_back(grid.index(i, j - 1));
        a.values.push_back(off);
      }
      if (i > 1) {
        a.col_indices.push_back(grid.index(i - 1, j));
        a.values.push_back(off);
      }
      a.col_indices.push_back(grid.index(i, j));
      a.values.push_back(diag);
      if (i < side) {
        a.col_indices.push_back(grid.index(i + 1, j));
        a.values.push_back(off);
      }
      if (j < side) {
        a.col_indices.push_back(grid.index(i, j + 1));
        a.values.push_back(off);
      }
      a.row_offsets.push_back(a.col_indices.size());
    }
  }
  return a;
}

[[nodiscard]] inline DenseVector matvec(const SparseMatrix& a, const DenseVector& u) {
  if (u.size() != a.n) {
    throw std::invalid_argument("matvec: dimension mismatch (" + std::to_string(a.n) + " vs " +
                                std::to_string(u.size()) + ")");
  }
  std::vector<double> out(a.n, 0.0);
  for (std::size_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) s += a.values[k] * u[a.col_indices[k]];
    out[i] = s;
  }
  return DenseVector(std::move(out));
}

/// CG failed to reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  [[nodiscard]] double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

struct CgResult {
  DenseVector x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;
};

/// Unpreconditioned conjugate gradients from x = 0. Stops once
/// ||Ax - b|| <= rel_tol * ||b|| (the recurrence residual is confirmed
/// against an explicit one before returning).
[[nodiscard]] inline CgResult cg_solve_detailed(const SparseMatrix& a, const DenseVector& b, double rel_tol = 1e-10,
                                                std::size_t max_iter = 0) {
  if (b.size() != a.n) throw std::invalid_argument("cg_solve: dimension mismatch");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("cg_solve: rel_tol must lie in (0, 1)");
  if (max_iter == 0) max_iter = 10 * a.n;

  const double b_norm = norm(b);
  CgResult res{DenseVector(a.n, 0.0), 0, 0.0};
  if (b_norm == 0.0) return res;

  const double target = rel_tol * b_norm;
  DenseVector r = b;
  DenseVector p = r;
  double rr = norm_squared(r);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const DenseVector ap = matvec(a, p);
    const double step = rr / dot(p, ap);
    res.x = lincomb(1.0, res.x, step, p);
    r = lincomb(1.0, r, -step, ap);
    const double rr_next = norm_squared(r);
    res.iterations = it;
    if (std::sqrt(rr_next) <= target) {
      const double true_res = norm(b - matvec(a, res.x));
      if (true_res <= target) {
        res.residual_norm = true_res;
        return res;
      }
      // Recurrence drifted from the true residual; restart from the current x.
      r = b - matvec(a, res.x);
      p = r;
      rr = norm_squared(r);
      continue;
    }
    p = lincomb(1.0, r, rr_next / rr, p);
    rr = rr_next;
  }
  const double last = norm(b - matvec(a, res.x));
  throw ConvergenceError("cg_solve: no convergence in " + std::to_string(max_iter) + " iterations", last);
}

[[nodiscard]] inline DenseVector cg_solve(const SparseMatrix& a, const DenseVector& b, double rel_tol = 1e-10,
                                          std::size_t max_iter = 0) {
  return cg_solve_detailed(a, b, rel_tol, max_iter).x;
}

struct ExtremeEigenvalues {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Closed-form extreme eigenvalues of build_laplacian_2d(h).
[[nodiscard]] inline ExtremeEigenvalues laplacian_extreme_eigs(double h) {
  const auto grid = UnitSquareGrid::from_width(h);
  const double hh = grid.h();
  const double s = std::sin(std::numbers::pi * hh / 2.0);
  const double c = std::cos(std::numbers::pi * hh / 2.0);
  return {8.0 / (hh * hh) * s * s, 8.0 / (hh * hh) * c * c};
}

}  // namespace holder_pg
