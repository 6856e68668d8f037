#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "gridsched/error.hpp"
#include "gridsched/milp.hpp"
#include "lp_form.hpp"
#include "simplex.hpp"

namespace gridsched::milp {

namespace {

using detail::VarState;

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInf;
  std::vector<std::pair<int, double>> fixes;  // reduced column, value
  std::vector<VarState> basis;
};

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, const SolverConfig& config)
      : model_(model), config_(config),
        pre_(detail::presolve(model, config.presolve, config.feas_tol)),
        engine_(pre_.form, config) {
    for (int j = 0; j < pre_.form.n; ++j) {
      if (pre_.form.binary[j]) binaries_.push_back(j);
    }
    root_lower_ = pre_.form.lower;
    root_upper_ = pre_.form.upper;
  }

  MipSolution run();

 private:
  using Clock = std::chrono::steady_clock;

  double tolerance_for(double objective) const {
    return std::max(config_.abs_gap, config_.rel_gap * std::abs(objective));
  }
  double cutoff() const {
    return has_incumbent_ ? incumbent_ - tolerance_for(incumbent_) : kInf;
  }
  void apply_fixes(const std::vector<std::pair<int, double>>& fixes);
  std::vector<double> expand(const std::vector<double>& reduced) const;
  int select_branch(const std::vector<double>& x) const;
  void consider_incumbent(const std::vector<double>& x_reduced);
  void try_start_incumbent();
  LpStatus reoptimize(double cut);

  const Model& model_;
  SolverConfig config_;
  detail::Presolved pre_;
  detail::SimplexEngine engine_;
  std::vector<int> binaries_;
  std::vector<double> root_lower_, root_upper_;
  std::vector<std::pair<int, double>> applied_;

  bool has_incumbent_ = false;
  double incumbent_ = kInf;
  std::vector<double> incumbent_x_;
};

void BranchAndBound::apply_fixes(const std::vector<std::pair<int, double>>& fixes) {
  for (const auto& [j, v] : applied_) engine_.set_bounds(j, root_lower_[j], root_upper_[j]);
  for (const auto& [j, v] : fixes) engine_.set_bounds(j, v, v);
  applied_ = fixes;
}

std::vector<double> BranchAndBound::expand(const std::vector<double>& reduced) const {
  std::vector<double> x(model_.num_columns());
  for (int j = 0; j < model_.num_columns(); ++j) {
    const int rc = pre_.reduced_col[j];
    x[j] = rc < 0 ? pre_.fixed_value[j] : reduced[rc];
  }
  return x;
}

int BranchAndBound::select_branch(const std::vector<double>& x) const {
  int chosen = -1;
  double best = 0.0;
  for (int j : binaries_) {
    const double f = x[j] - std::floor(x[j]);
    const double dist = std::min(f, 1.0 - f);
    if (dist <= config_.int_tol) continue;
    if (config_.branch_rule == BranchRule::FirstFractional) return j;
    if (dist > best + 1e-12) {
      best = dist;
      chosen = j;
    }
  }
  return chosen;
}

LpStatus BranchAndBound::reoptimize(double cut) {
  LpStatus status = engine_.solve_dual(cut);
  if (status == LpStatus::NumericalFailure || status == LpStatus::IterationLimit) {
    engine_.load_basis({});
    status = engine_.solve_primal();
  }
  return status;
}

void BranchAndBound::consider_incumbent(const std::vector<double>& x_reduced) {
  // Pin binaries to their rounded values and re-solve so the incumbent is
  // exactly integral and the continuous part consistent with it.
  const auto saved_basis = engine_.basis();
  auto pinned = applied_;
  std::vector<char> seen(pre_.form.n, 0);
  for (const auto& [j, v] : pinned) seen[j] = 1;
  for (int j : binaries_) {
    if (!seen[j]) pinned.emplace_back(j, std::round(x_reduced[j]));
  }
  const auto node_fixes = applied_;
  apply_fixes(pinned);
  const LpStatus status = reoptimize(kInf);
  if (status == LpStatus::Optimal) {
    auto x = expand(engine_.primal());
    for (int j = 0; j < model_.num_columns(); ++j) {
      if (model_.column(j).binary) x[j] = std::round(x[j]);
    }
    const double z = model_.objective_value(x);
    if (!has_incumbent_ || z < incumbent_) {
      has_incumbent_ = true;
      incumbent_ = z;
      incumbent_x_ = std::move(x);
    }
  }
  apply_fixes(node_fixes);
  engine_.load_basis(saved_basis);
}

void BranchAndBound::try_start_incumbent() {
  const auto& start = config_.start_binaries;
  if (start.empty()) return;
  if (static_cast<int>(start.size()) != model_.num_binaries()) {
    throw Error(ErrorCode::Argument, "start_binaries does not match the number of binary columns");
  }
  std::vector<std::pair<int, double>> fixes;
  int b = 0;
  for (int j = 0; j < model_.num_columns(); ++j) {
    if (!model_.column(j).binary) continue;
    const double v = std::round(start[b++]);
    const int rc = pre_.reduced_col[j];
    if (rc < 0) {
      if (pre_.fixed_value[j] != v) return;
      continue;
    }
    if (v < root_lower_[rc] || v > root_upper_[rc]) return;
    fixes.emplace_back(rc, v);
  }
  apply_fixes(fixes);
  if (reoptimize(kInf) == LpStatus::Optimal) {
    auto x = expand(engine_.primal());
    for (int j = 0; j < model_.num_columns(); ++j) {
      if (model_.column(j).binary) x[j] = std::round(x[j]);
    }
    has_incumbent_ = true;
    incumbent_ = model_.objective_value(x);
    incumbent_x_ = std::move(x);
  }
  apply_fixes({});
}

MipSolution BranchAndBound::run() {
  const auto started = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };
  MipSolution out;

  if (pre_.infeasible) {
    out.status = MipStatus::Infeasible;
    return out;
  }

  LpStatus root_status = engine_.solve_primal();
  if (root_status == LpStatus::NumericalFailure || root_status == LpStatus::IterationLimit) {
    throw Error(ErrorCode::Solver,
                std::string("root LP relaxation failed: ") + std::string(to_string(root_status)));
  }
  out.nodes = 1;
  if (root_status == LpStatus::Infeasible) {
    out.status = MipStatus::Infeasible;
    out.lp_iterations = engine_.iterations();
    return out;
  }
  if (root_status == LpStatus::Unbounded) {
    throw Error(ErrorCode::Solver, "LP relaxation is unbounded");
  }
  const double root_obj = engine_.objective();
  out.root_bound = root_obj;
  const auto root_basis = engine_.basis();
  const auto root_x = engine_.primal();

  try_start_incumbent();
  engine_.load_basis(root_basis);

  auto node_less = [&](const Node& a, const Node& b) {
    // Heap comparator: true when a has lower priority than b.
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  };
  std::vector<Node> open;
  std::multiset<double> open_bounds;
  long next_id = 1;
  double best_bound = root_obj;
  out.bound_trace.push_back(best_bound);

  auto push_children = [&](const Node& parent, int var, double obj) {
    for (double value : {1.0, 0.0}) {
      Node child;
      child.id = 0;
      child.depth = parent.depth + 1;
      child.bound = obj;
      child.fixes = parent.fixes;
      child.fixes.emplace_back(var, value);
      child.basis = engine_.basis();
      open.push_back(std::move(child));
    }
    // Down branch gets the smaller id and is popped first in depth-first order.
    Node& up = open[open.size() - 2];
    Node& down = open[open.size() - 1];
    down.id = next_id++;
    up.id = next_id++;
    open_bounds.insert(obj);
    open_bounds.insert(obj);
    if (config_.node_order == NodeOrder::BestBound) {
      std::push_heap(open.begin(), open.end() - 1, node_less);
      std::push_heap(open.begin(), open.end(), node_less);
    }
  };

  // Frontier bound: open nodes, nodes pruned by the cutoff and the incumbent.
  double pruned_min = kInf;
  auto record_bound = [&] {
    double current = std::min(pruned_min, has_incumbent_ ? incumbent_ : kInf);
    if (!open_bounds.empty()) current = std::min(current, *open_bounds.begin());
    if (current < kInf) best_bound = std::max(best_bound, current);
    out.bound_trace.push_back(best_bound);
  };

  auto gap_closed = [&] {
    return has_incumbent_ && incumbent_ - best_bound <= tolerance_for(incumbent_);
  };

  // Root processing.
  {
    Node root;
    root.depth = 0;
    root.bound = root_obj;
    const int var = select_branch(root_x);
    if (var < 0) {
      consider_incumbent(root_x);
    } else if (root_obj >= cutoff()) {
      pruned_min = root_obj;
    } else {
      engine_.load_basis(root_basis);
      push_children(root, var, root_obj);
    }
    record_bound();
  }

  enum class Stop { None, Nodes, Time };
  Stop stop = Stop::None;
  while (!open.empty() && !gap_closed()) {
    if (out.nodes >= config_.node_limit) {
      stop = Stop::Nodes;
      break;
    }
    if (elapsed() > config_.time_limit) {
      stop = Stop::Time;
      break;
    }
    Node node;
    if (config_.node_order == NodeOrder::BestBound) {
      std::pop_heap(open.begin(), open.end(), node_less);
    }
    node = std::move(open.back());
    open.pop_back();
    open_bounds.erase(open_bounds.find(node.bound));

    if (node.bound >= cutoff()) {
      pruned_min = std::min(pruned_min, node.bound);
      record_bound();
      continue;
    }
    apply_fixes(node.fixes);
    engine_.load_basis(node.basis);
    const LpStatus status = reoptimize(cutoff());
    ++out.nodes;
    if (status == LpStatus::Optimal) {
      const double obj = engine_.objective();
      if (obj < cutoff()) {
        const auto x = engine_.primal();
        const int var = select_branch(x);
        if (var < 0) {
          consider_incumbent(x);
        } else {
          push_children(node, var, obj);
        }
      } else {
        pruned_min = std::min(pruned_min, std::max(node.bound, obj));
      }
    } else if (status == LpStatus::Cutoff) {
      pruned_min = std::min(pruned_min, std::max(node.bound, engine_.objective()));
    } else if (status != LpStatus::Infeasible && status != LpStatus::Cutoff) {
      throw Error(ErrorCode::Solver,
                  std::string("node LP failed: ") + std::string(to_string(status)));
    }
    record_bound();
  }

  out.lp_iterations = engine_.iterations();
  out.has_incumbent = has_incumbent_;
  if (has_incumbent_) {
    out.objective = incumbent_;
    out.x = incumbent_x_;
    best_bound = std::min(best_bound, incumbent_);
    out.gap = incumbent_ - best_bound;
  }
  out.best_bound = best_bound;

  const bool default_gap_met =
      has_incumbent_ && out.gap <= std::max(1e-6, 1e-6 * std::abs(incumbent_));
  switch (stop) {
    case Stop::Nodes: out.status = MipStatus::NodeLimit; break;
    case Stop::Time: out.status = MipStatus::TimeLimit; break;
    case Stop::None:
      if (!has_incumbent_) out.status = MipStatus::Infeasible;
      else out.status = default_gap_met ? MipStatus::Optimal : MipStatus::GapLimit;
      break;
  }
  if (stop != Stop::None && gap_closed()) {
    out.status = default_gap_met ? MipStatus::Optimal : MipStatus::GapLimit;
  }
  return out;
}

}  // namespace

MipSolution solve_mip(const Model& model, const SolverConfig& config) {
  const auto issues = model.check();
  if (!issues.empty()) throw Error(ErrorCode::InvalidModel, "invalid model: " + issues.front());
  BranchAndBound bb(model, config);
  return bb.run();
}

}  // namespace gridsched::milp
