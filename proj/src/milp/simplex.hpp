#pragma once

#include <cstdint>
#include <vector>

#include "basis_factor.hpp"
#include "lp_form.hpp"

namespace gridsched::milp::detail {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

/// Bounded-variable revised simplex over an LpForm. Primal simplex (composite
/// phase 1) solves from any basis; dual simplex reoptimizes after bound
/// changes. Pricing is Dantzig with lowest-index tie-break and switches to
/// Bland's rule after `stall_threshold` consecutive degenerate pivots.
class SimplexEngine {
 public:
  SimplexEngine(LpForm form, const SolverConfig& config);

  LpStatus solve_primal();
  /// Dual simplex from the current basis. Falls back to the primal simplex
  /// when the basis is not dual feasible. Stops with Cutoff as soon as the
  /// dual objective exceeds `cutoff`.
  LpStatus solve_dual(double cutoff = kInf);

  const LpForm& form() const { return form_; }
  void set_bounds(int j, double lower, double upper);
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }

  const std::vector<VarState>& basis() const { return state_; }
  void load_basis(const std::vector<VarState>& state);

  double objective() const;
  std::vector<double> primal() const;  // structural values
  std::vector<double> duals();         // row duals for the current basis
  const std::vector<double>& farkas() const { return farkas_; }
  const std::vector<double>& ray() const { return ray_; }
  long iterations() const { return iterations_; }
  void set_iteration_budget(long budget) { max_iterations_ = budget; }

 private:
  bool refactor();
  void reset_to_slack_basis();
  void place_nonbasic(int j);
  void compute_primal();
  void compute_duals(const std::vector<double>& basic_costs);
  double column_dot(int j, const std::vector<double>& y) const;
  double tol_lower(int j) const;
  double tol_upper(int j) const;
  bool is_fixed(int j) const { return lower_[j] == upper_[j]; }
  void pivot(int pos, int entering, const std::vector<double>& alpha, VarState leaving_state,
             double leaving_value);
  void note_step(bool degenerate);

  LpForm form_;
  SolverConfig config_;
  BasisFactor factor_;
  int n_ = 0;
  int m_ = 0;
  std::vector<double> lower_, upper_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> head_;
  std::vector<int> position_;
  std::vector<double> y_, d_;
  std::vector<double> farkas_, ray_;
  double dual_tol_ = 1e-9;
  bool factored_ = false;
  bool primal_dirty_ = true;
  int recoveries_ = 0;
  int stall_ = 0;
  bool bland_ = false;
  long iterations_ = 0;
  long max_iterations_ = 0;
};

}  // namespace gridsched::milp::detail
