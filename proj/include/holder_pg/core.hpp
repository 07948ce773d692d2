#pragma once

// Shared domain types: dense vectors, feasible sets, problem instances and
// solver traces. Everything here is a value type; the only mutable object a
// solver produces is its SolverTrace.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace holder_pg {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A NaN or Inf appeared in an evaluation or in vector arithmetic.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A line search doubled its curvature estimate past the allowed limit.
class RunawayLineSearch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form parameters that contradict an assumption of the method
/// (e.g. a fixed UFGM step with nu > 1).
class ParameterInconsistency : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem parameters that break the strong-convexity requirement.
class ConstraintViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An audited inequality failed during a run.
class AuditFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// DenseVector
// ---------------------------------------------------------------------------

/// Fixed-length vector of doubles. Construction and every arithmetic helper
/// below reject non-finite entries.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0) : values_(n, fill) { check_finite("DenseVector"); }
  DenseVector(std::initializer_list<double> init) : values_(init) { check_finite("DenseVector"); }
  explicit DenseVector(std::vector<double> values) : values_(std::move(values)) { check_finite("DenseVector"); }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] const std::vector<double>& raw() const noexcept { return values_; }

  [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
  [[nodiscard]] auto end() const noexcept { return values_.end(); }
  [[nodiscard]] auto begin() noexcept { return values_.begin(); }
  [[nodiscard]] auto end() noexcept { return values_.end(); }

  /// Throws NumericalError naming `where` if any entry is NaN or Inf.
  void check_finite(const char* where) const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw NumericalError(std::string(where) + ": non-finite entry at index " + std::to_string(i));
      }
    }
  }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

namespace detail {

inline void require_same_size(const DenseVector& a, const DenseVector& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace detail

[[nodiscard]] inline double dot(const DenseVector& a, const DenseVector& b) {
  detail::require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

[[nodiscard]] inline double norm_squared(const DenseVector& a) { return dot(a, a); }
[[nodiscard]] inline double norm(const DenseVector& a) { return std::sqrt(norm_squared(a)); }

[[nodiscard]] inline double distance(const DenseVector& a, const DenseVector& b) {
  detail::require_same_size(a, b, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Returns a*x + b*y.
[[nodiscard]] inline DenseVector lincomb(double a, const DenseVector& x, double b, const DenseVector& y) {
  detail::require_same_size(x, y, "lincomb");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return DenseVector(std::move(out));
}

[[nodiscard]] inline DenseVector operator+(const DenseVector& x, const DenseVector& y) { return lincomb(1.0, x, 1.0, y); }
[[nodiscard]] inline DenseVector operator-(const DenseVector& x, const DenseVector& y) { return lincomb(1.0, x, -1.0, y); }

[[nodiscard]] inline DenseVector operator*(double a, const DenseVector& x) {
  std::vector<double> out(x.raw());
  for (double& v : out) v *= a;
  return DenseVector(std::move(out));
}

// ---------------------------------------------------------------------------
// FeasibleSet
// ---------------------------------------------------------------------------

/// Either all of R^n or a coordinate box with finite bounds.
class FeasibleSet {
 public:
  enum class Kind { WholeSpace, Box };

  [[nodiscard]] static FeasibleSet whole_space(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("FeasibleSet: dimension must be positive");
    FeasibleSet s;
    s.kind_ = Kind::WholeSpace;
    s.dim_ = dim;
    return s;
  }

  [[nodiscard]] static FeasibleSet box(DenseVector lower, DenseVector upper) {
    detail::require_same_size(lower, upper, "FeasibleSet::box");
    if (lower.empty()) throw std::invalid_argument("FeasibleSet::box: dimension must be positive");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) {
        throw std::invalid_argument("FeasibleSet::box: lower > upper at index " + std::to_string(i));
      }
    }
    FeasibleSet s;
    s.kind_ = Kind::Box;
    s.dim_ = lower.size();
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
  }

  [[nodiscard]] static FeasibleSet uniform_box(std::size_t dim, double lo, double hi) {
    return box(DenseVector(dim, lo), DenseVector(dim, hi));
  }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_box() const noexcept { return kind_ == Kind::Box; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const DenseVector& lower() const { return lower_; }
  [[nodiscard]] const DenseVector& upper() const { return upper_; }

  [[nodiscard]] bool contains(const DenseVector& u, double tol = 0.0) const {
    if (u.size() != dim_) return false;
    if (kind_ == Kind::WholeSpace) return true;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (u[i] < lower_[i] - tol || u[i] > upper_[i] + tol) return false;
    }
    return true;
  }

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::WholeSpace;
  std::size_t dim_ = 0;
  DenseVector lower_;
  DenseVector upper_;
};

/// Euclidean projection onto `set`.
[[nodiscard]] inline DenseVector project(const FeasibleSet& set, const DenseVector& u) {
  if (u.size() != set.dim()) {
    throw std::invalid_argument("project: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                                std::to_string(set.dim()) + ")");
  }
  if (!set.is_box()) return u;
  DenseVector out = u;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::clamp(u[i], set.lower()[i], set.upper()[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Problem model
// ---------------------------------------------------------------------------

/// Hölder exponent and constant of one component gradient.
struct ComponentMeta {
  double alpha = 1.0;
  double lipschitz_holder = 1.0;

  ComponentMeta() = default;
  ComponentMeta(double a, double l) : alpha(a), lipschitz_holder(l) { validate(); }

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("ComponentMeta: alpha must lie in (0, 1]");
    if (!(lipschitz_holder > 0.0) || !std::isfinite(lipschitz_holder)) {
      throw std::invalid_argument("ComponentMeta: Hölder constant must be positive and finite");
    }
  }
};

using ScalarFn = std::function<double(const DenseVector&)>;
using VectorFn = std::function<DenseVector(const DenseVector&)>;

/// One summand f_i of the objective f = (1/m) * sum_i f_i together with its
/// Hölder metadata.
struct Component {
  ComponentMeta meta;
  ScalarFn value;
  VectorFn gradient;
};

/// Region used by the validation probes to draw random points.
struct SamplingRegion {
  DenseVector center;
  double radius = 1.0;
};

struct ProblemInstance {
  std::string name;
  std::size_t dim = 0;
  ScalarFn objective;
  VectorFn gradient;
  double mu = 0.0;
  std::vector<Component> components;
  FeasibleSet feasible = FeasibleSet::whole_space(1);
  std::optional<DenseVector> minimizer;
  std::optional<double> optimal_value;
  /// Problem-supplied starting point; solvers fall back to project(0).
  std::optional<DenseVector> initial;
  /// Problem-specific residual r(u, tau); empty when undefined.
  std::function<double(const DenseVector&, double)> residual;
  SamplingRegion sampling;

  [[nodiscard]] std::vector<ComponentMeta> metas() const {
    std::vector<ComponentMeta> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.meta);
    return out;
  }

  /// Checks the structural invariants; throws std::invalid_argument.
  void validate() const {
    if (dim == 0) throw std::invalid_argument(name + ": dimension must be positive");
    if (!objective || !gradient) throw std::invalid_argument(name + ": missing evaluator");
    if (!(mu > 0.0)) throw std::invalid_argument(name + ": mu must be positive");
    if (components.empty()) throw std::invalid_argument(name + ": at least one component required");
    for (const auto& c : components) c.meta.validate();
    if (feasible.dim() != dim) throw std::invalid_argument(name + ": feasible set dimension mismatch");
    if (minimizer) {
      if (!feasible.contains(*minimizer, 1e-12)) throw std::invalid_argument(name + ": minimizer is infeasible");
      if (optimal_value) {
        const double fv = objective(*minimizer);
        if (std::abs(fv - *optimal_value) > 1e-10 * std::max(1.0, std::abs(*optimal_value))) {
          throw std::invalid_argument(name + ": objective(minimizer) disagrees with optimal_value");
        }
      }
    }
    if (initial && initial->size() != dim) throw std::invalid_argument(name + ": initial iterate has wrong size");
  }
};

/// f(u) with the NaN policy applied.
[[nodiscard]] inline double eval_objective(const ProblemInstance& p, const DenseVector& u) {
  const double v = p.objective(u);
  if (!std::isfinite(v)) throw NumericalError(p.name + ": objective returned a non-finite value");
  return v;
}

/// grad f(u) with the NaN policy applied.
[[nodiscard]] inline DenseVector eval_gradient(const ProblemInstance& p, const DenseVector& u) {
  DenseVector g = p.gradient(u);
  if (g.size() != u.size()) throw std::invalid_argument(p.name + ": gradient has wrong dimension");
  g.check_finite("gradient");
  return g;
}

/// The problem's starting point, or the projection of zero.
[[nodiscard]] inline DenseVector default_initial(const ProblemInstance& p) {
  if (p.initial) return project(p.feasible, *p.initial);
  return project(p.feasible, DenseVector(p.dim, 0.0));
}

// ---------------------------------------------------------------------------
// SolverTrace
// ---------------------------------------------------------------------------

struct IterationRecord {
  std::size_t iter = 0;
  double f_value = 0.0;
  std::optional<double> dist_to_min;
  std::optional<double> residual;
  std::optional<double> rho;
  std::optional<int> ls_trials;
};

enum class StopReason { MaxIterations, TargetReached };

struct TraceSummary {
  std::size_t iterations = 0;
  long long total_ls_trials = 0;
  double wall_seconds = 0.0;
  StopReason stop = StopReason::MaxIterations;
};

struct EstimatingAudit;

/// Per-iteration records of a solver run. Single writer; append() enforces
/// the record invariants.
class SolverTrace {
 public:
  void append(IterationRecord r) {
    if (!records_.empty() && r.iter <= records_.back().iter) {
      throw std::logic_error("SolverTrace: iteration indices must increase strictly");
    }
    if (records_.empty() && r.iter != 0) throw std::logic_error("SolverTrace: first record must be iteration 0");
    if (r.ls_trials && *r.ls_trials < 1) throw std::logic_error("SolverTrace: ls_trials must be >= 1");
    records_.push_back(std::move(r));
  }

  [[nodiscard]] const std::vector<IterationRecord>& records() const noexcept { return records_; }
  [[nodiscard]] const IterationRecord& last() const { return records_.back(); }
  [[nodiscard]] bool reached_target() const noexcept { return summary.stop == StopReason::TargetReached; }

  TraceSummary summary;
  DenseVector final_iterate;
  std::shared_ptr<const EstimatingAudit> audit;

 private:
  std::vector<IterationRecord> records_;
};

}  // namespace holder_pg
