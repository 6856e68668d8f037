#include <cmath>

#include "lp_form.hpp"

namespace gridsched::milp::detail {

namespace {

void row_bounds(Sense sense, double rhs, double& lo, double& up) {
  switch (sense) {
    case Sense::LessEqual: lo = -kInf; up = rhs; break;
    case Sense::GreaterEqual: lo = rhs; up = kInf; break;
    case Sense::Equal: lo = rhs; up = rhs; break;
  }
}

}  // namespace

Presolved presolve(const Model& model, bool enabled, double feas_tol) {
  Presolved pre;
  const int n0 = model.num_columns();
  const int m0 = model.num_rows();
  pre.reduced_col.assign(n0, -1);
  pre.fixed_value.assign(n0, 0.0);

  double offset = model.objective_offset();
  for (int j = 0; j < n0; ++j) {
    const auto& c = model.column(j);
    if (enabled && c.lower == c.upper) {
      pre.fixed_value[j] = c.lower;
      offset += c.cost * c.lower;
    } else {
      pre.reduced_col[j] = static_cast<int>(pre.col_map.size());
      pre.col_map.push_back(j);
    }
  }

  auto& f = pre.form;
  f.n = static_cast<int>(pre.col_map.size());
  std::vector<double> row_lo, row_up;
  f.row_start.push_back(0);
  for (int i = 0; i < m0; ++i) {
    double fixed_sum = 0.0;
    int kept = 0;
    for (const auto& e : model.row(i)) {
      if (pre.reduced_col[e.column] < 0) {
        fixed_sum += e.value * pre.fixed_value[e.column];
      } else {
        ++kept;
      }
    }
    double lo = 0.0, up = 0.0;
    row_bounds(model.row_sense(i), model.row_rhs(i), lo, up);
    if (enabled && kept == 0) {
      const double tol_lo = feas_tol * std::max(1.0, std::abs(lo));
      const double tol_up = feas_tol * std::max(1.0, std::abs(up));
      if (fixed_sum < lo - tol_lo || fixed_sum > up + tol_up) {
        pre.infeasible = true;
        pre.infeasible_row = i;
        // y = -1 proves a_i x > up, y = +1 proves a_i x < lo.
        pre.infeasible_sign = fixed_sum > up ? -1.0 : 1.0;
      }
      continue;
    }
    for (const auto& e : model.row(i)) {
      const int rc = pre.reduced_col[e.column];
      if (rc < 0) continue;
      f.row_col.push_back(rc);
      f.row_val.push_back(e.value);
    }
    f.row_start.push_back(static_cast<int>(f.row_col.size()));
    row_lo.push_back(lo == -kInf ? lo : lo - fixed_sum);
    row_up.push_back(up == kInf ? up : up - fixed_sum);
    pre.row_map.push_back(i);
  }
  f.m = static_cast<int>(pre.row_map.size());
  f.offset = offset;

  // CSC from CSR.
  f.col_start.assign(f.n + 1, 0);
  for (int rc : f.row_col) ++f.col_start[rc + 1];
  for (int j = 0; j < f.n; ++j) f.col_start[j + 1] += f.col_start[j];
  f.col_row.resize(f.row_col.size());
  f.col_val.resize(f.row_col.size());
  std::vector<int> fill(f.col_start.begin(), f.col_start.end() - 1);
  for (int i = 0; i < f.m; ++i) {
    for (int k = f.row_start[i]; k < f.row_start[i + 1]; ++k) {
      const int pos = fill[f.row_col[k]]++;
      f.col_row[pos] = i;
      f.col_val[pos] = f.row_val[k];
    }
  }

  f.lower.resize(f.n + f.m);
  f.upper.resize(f.n + f.m);
  f.cost.assign(f.n + f.m, 0.0);
  f.binary.resize(f.n);
  for (int j = 0; j < f.n; ++j) {
    const auto& c = model.column(pre.col_map[j]);
    f.lower[j] = c.lower;
    f.upper[j] = c.upper;
    f.cost[j] = c.cost;
    f.binary[j] = c.binary ? 1 : 0;
  }
  for (int i = 0; i < f.m; ++i) {
    f.lower[f.n + i] = row_lo[i];
    f.upper[f.n + i] = row_up[i];
  }
  return pre;
}

LpSolution postsolve(const Model& model, const Presolved& pre, LpStatus status,
                     const std::vector<double>& x_reduced,
                     const std::vector<double>& y_reduced,
                     const std::vector<double>& farkas_reduced,
                     const std::vector<double>& ray_reduced, long iterations) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  const int n0 = model.num_columns();
  const int m0 = model.num_rows();

  if (status == LpStatus::Infeasible) {
    sol.farkas.assign(m0, 0.0);
    if (pre.infeasible) {
      sol.farkas[pre.infeasible_row] = pre.infeasible_sign;
    } else {
      for (std::size_t i = 0; i < farkas_reduced.size(); ++i) {
        sol.farkas[pre.row_map[i]] = farkas_reduced[i];
      }
    }
    return sol;
  }
  if (status == LpStatus::Unbounded) {
    sol.primal_ray.assign(n0, 0.0);
    for (std::size_t j = 0; j < ray_reduced.size(); ++j) {
      sol.primal_ray[pre.col_map[j]] = ray_reduced[j];
    }
  }
  if (status != LpStatus::Optimal && status != LpStatus::Unbounded) return sol;

  sol.x.assign(n0, 0.0);
  for (int j = 0; j < n0; ++j) {
    const int rc = pre.reduced_col[j];
    sol.x[j] = rc < 0 ? pre.fixed_value[j] : x_reduced[rc];
    // Round-off next to a bound would show up as 1e-16 in reports.
    const auto& c = model.column(j);
    for (double b : {c.lower, c.upper}) {
      if (std::isfinite(b) && std::abs(sol.x[j] - b) <= 1e-11 * (1.0 + std::abs(b))) sol.x[j] = b;
    }
  }
  sol.row_duals.assign(m0, 0.0);
  for (std::size_t i = 0; i < y_reduced.size(); ++i) sol.row_duals[pre.row_map[i]] = y_reduced[i];
  sol.reduced_costs.resize(n0);
  for (int j = 0; j < n0; ++j) sol.reduced_costs[j] = model.column(j).cost;
  for (int i = 0; i < m0; ++i) {
    const double y = sol.row_duals[i];
    if (y == 0.0) continue;
    for (const auto& e : model.row(i)) sol.reduced_costs[e.column] -= y * e.value;
  }
  sol.objective = model.objective_value(sol.x);
  return sol;
}

}  // namespace gridsched::milp::detail
