#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "holder_pg/core.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_); }

  holder_pg::DenseVector vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return holder_pg::DenseVector(std::move(v));
  }

  /// Box with lower <= upper, occasionally degenerate in a coordinate.
  holder_pg::FeasibleSet box(std::size_t n, double spread) {
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = uniform(-spread, spread);
      const double b = index(0, 9) == 0 ? a : uniform(-spread, spread);
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
    }
    return holder_pg::FeasibleSet::box(holder_pg::DenseVector(std::move(lo)), holder_pg::DenseVector(std::move(hi)));
  }

  /// Uniform point of a box.
  holder_pg::DenseVector inside(const holder_pg::FeasibleSet& box) {
    std::vector<double> v(box.dim());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double lo = box.lower()[i], hi = box.upper()[i];
      v[i] = lo == hi ? lo : uniform(lo, hi);
    }
    return holder_pg::DenseVector(std::move(v));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gen
