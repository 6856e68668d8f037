#pragma once

// Independent checks on LP results, computed from the Model alone.

#include <cstdint>

#include "gridsched/milp.hpp"

namespace gridsched::testing {

/// Deterministic generator (SplitMix64). Distribution helpers are written out
/// so generated instances are identical on every standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

 private:
  std::uint64_t state_;
};

/// Dense random LP with finite column boxes and rows built around an interior
/// point, hence feasible and bounded.
milp::Model random_bounded_lp(std::uint64_t seed, int rows, int cols);

/// Max violation of row senses and column bounds at x.
double primal_residual(const milp::Model& model, const std::vector<double>& x);

/// Lagrangian dual objective for the given row duals; -inf when a reduced cost
/// points at an infinite bound beyond `tiny`.
double dual_objective(const milp::Model& model, const std::vector<double>& row_duals,
                      double tiny = 1e-9);

/// Max of |reduced cost| times distance to the bound it prices, over columns
/// and rows.
double complementarity(const milp::Model& model, const std::vector<double>& x,
                       const std::vector<double>& row_duals);

/// Max over column and row boxes of y^T (A x - r). Negative proves
/// infeasibility.
double farkas_value(const milp::Model& model, const std::vector<double>& y, double tiny = 1e-12);

}  // namespace gridsched::testing
