#pragma once

#include <vector>

#include "gridsched/milp.hpp"

namespace gridsched::milp::detail {

/// Computational form: rows become logical variables r = A x, so the engine
/// works on [A -I] (x, r) = 0 with every variable boxed. Variables 0..n-1 are
/// structural, n..n+m-1 logical.
struct LpForm {
  int n = 0;
  int m = 0;
  std::vector<int> col_start, col_row;  // CSC of A
  std::vector<double> col_val;
  std::vector<int> row_start, row_col;  // CSR of A
  std::vector<double> row_val;
  std::vector<double> lower, upper, cost;  // n + m
  std::vector<char> binary;                // n
  double offset = 0.0;
};

struct Presolved {
  LpForm form;
  std::vector<int> col_map;  // reduced column -> model column
  std::vector<int> row_map;  // reduced row -> model row
  std::vector<int> reduced_col;  // model column -> reduced column or -1
  std::vector<double> fixed_value;  // model column value when removed
  bool infeasible = false;
  int infeasible_row = -1;
  double infeasible_sign = 0.0;
};

/// Removes fixed columns (substituting them into row bounds and the objective
/// offset) and rows left without entries. With `enabled` false the form is a
/// one-to-one copy.
Presolved presolve(const Model& model, bool enabled, double feas_tol);

/// Maps engine results in reduced space back onto the model.
LpSolution postsolve(const Model& model, const Presolved& pre, LpStatus status,
                     const std::vector<double>& x_reduced,
                     const std::vector<double>& y_reduced,
                     const std::vector<double>& farkas_reduced,
                     const std::vector<double>& ray_reduced, long iterations);

}  // namespace gridsched::milp::detail
