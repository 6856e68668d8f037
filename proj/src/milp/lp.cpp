#include <string>

#include "gridsched/error.hpp"
#include "gridsched/milp.hpp"
#include "lp_form.hpp"
#include "simplex.hpp"

namespace gridsched::milp {

namespace {

void require_well_formed(const Model& model) {
  const auto issues = model.check();
  if (!issues.empty()) {
    throw Error(ErrorCode::InvalidModel, "invalid model: " + issues.front());
  }
}

LpSolution collect(const Model& model, const detail::Presolved& pre,
                   detail::SimplexEngine& engine, LpStatus status) {
  std::vector<double> x, y;
  if (status == LpStatus::Optimal || status == LpStatus::Unbounded) {
    x = engine.primal();
    y = engine.duals();
  }
  return detail::postsolve(model, pre, status, x, y, engine.farkas(), engine.ray(),
                           engine.iterations());
}

}  // namespace

LpSolution solve_lp(const Model& model, const SolverConfig& config) {
  require_well_formed(model);
  auto pre = detail::presolve(model, config.presolve, config.feas_tol);
  if (pre.infeasible) {
    return detail::postsolve(model, pre, LpStatus::Infeasible, {}, {}, {}, {}, 0);
  }
  detail::SimplexEngine engine(pre.form, config);
  const LpStatus status = engine.solve_primal();
  return collect(model, pre, engine, status);
}

struct IncrementalLp::Impl {
  Impl(const Model& m, const SolverConfig& c)
      : model(m), config(c), pre(detail::presolve(model, c.presolve, c.feas_tol)),
        engine(pre.form, c) {}

  Model model;
  SolverConfig config;
  detail::Presolved pre;
  detail::SimplexEngine engine;
  bool solved_once = false;
  bool last_ok = false;
};

IncrementalLp::IncrementalLp(const Model& model, const SolverConfig& config) {
  require_well_formed(model);
  impl_ = std::make_unique<Impl>(model, config);
}

IncrementalLp::~IncrementalLp() = default;
IncrementalLp::IncrementalLp(IncrementalLp&&) noexcept = default;
IncrementalLp& IncrementalLp::operator=(IncrementalLp&&) noexcept = default;

void IncrementalLp::set_bounds(int column, double lower, double upper) {
  auto& im = *impl_;
  if (column < 0 || column >= im.model.num_columns()) {
    throw Error(ErrorCode::Argument, "IncrementalLp: column out of range");
  }
  const int rc = im.pre.reduced_col[column];
  if (rc < 0) {
    if (lower != im.pre.fixed_value[column] || upper != lower) {
      throw Error(ErrorCode::Argument,
                  "IncrementalLp: column " + std::to_string(column) + " was removed by presolve");
    }
    return;
  }
  im.model.set_bounds(column, lower, upper);
  im.engine.set_bounds(rc, lower, upper);
}

LpSolution IncrementalLp::solve() {
  auto& im = *impl_;
  if (im.pre.infeasible) {
    return detail::postsolve(im.model, im.pre, LpStatus::Infeasible, {}, {}, {}, {}, 0);
  }
  LpStatus status = im.solved_once && im.last_ok ? im.engine.solve_dual() : im.engine.solve_primal();
  if (status == LpStatus::NumericalFailure) {
    // Retry cold.
    im.engine.load_basis({});
    status = im.engine.solve_primal();
  }
  im.solved_once = true;
  im.last_ok = status == LpStatus::Optimal || status == LpStatus::Infeasible;
  return collect(im.model, im.pre, im.engine, status);
}

}  // namespace gridsched::milp
