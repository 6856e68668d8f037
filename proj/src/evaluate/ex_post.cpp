#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "gridsched/error.hpp"
#include "gridsched/evaluate.hpp"

namespace gridsched {

namespace {

const Matrix* schedule_table(const Schedule& s, Var family) {
  switch (family) {
    case Var::P: return &s.p;
    case Var::S: return &s.spill;
    case Var::U: return &s.u;
    case Var::CSU: return &s.startup_cost;
    case Var::CSD: return &s.shutdown_cost;
    case Var::PL: return &s.flow;
    case Var::Theta: return &s.angle;
    case Var::PUD: return &s.unserved;
    case Var::EC: return &s.e_charge;
    case Var::ED: return &s.e_discharge;
    case Var::EV: return &s.soc;
    default: return nullptr;
  }
}

struct Recourse {
  ContingencyResponse response;
  Matrix capacity;
};

// Recourse LP for one contingency: every pre-contingency column is pinned to
// the schedule and rows touching only pinned columns are dropped.
Recourse solve_one(const Instance& inst, const Schedule& s, const CaseConfig& base, int k,
                   const ExPostOptions& opt) {
  CaseConfig cfg = base;
  cfg.mode = opt.pev_reserve ? CaseMode::GeneratorsAndPevs : CaseMode::GeneratorsOnly;
  cfg.contingencies = std::vector<int>{k};
  const Formulation f = build(inst, cfg);

  milp::Model lp;
  std::vector<char> pinned(f.model.num_columns(), 0);
  for (int j = 0; j < f.model.num_columns(); ++j) {
    const auto& key = f.catalog.key(j);
    const auto& c = f.model.column(j);
    const Matrix* table = key.k == -1 ? schedule_table(s, key.family) : nullptr;
    if (table) {
      double v = (*table)(key.a, key.t);
      if (key.family == Var::U) v = std::round(v);
      lp.add_column(v, v, c.cost, false, f.model.column_name(j));
      pinned[j] = 1;
    } else {
      lp.add_column(c.lower, c.upper, c.cost, false, f.model.column_name(j));
    }
  }
  for (int i = 0; i < f.model.num_rows(); ++i) {
    const auto row = f.model.row(i);
    const bool free = std::any_of(row.begin(), row.end(), [&](const milp::Entry& e) { return !pinned[e.column]; });
    if (free) lp.add_row(row, f.model.row_sense(i), f.model.row_rhs(i), f.model.row_name(i));
  }
  const auto sol = milp::solve_lp(lp, opt.solver);
  if (sol.status != milp::LpStatus::Optimal) {
    throw Error(ErrorCode::Solver, "recourse LP for contingency '" + inst.contingencies[k].id +
                                       "' ended " + std::string(milp::to_string(sol.status)));
  }
  Recourse out{extract_response(inst, f, sol.x), Matrix(s.capacity_reserved.rows, s.capacity_reserved.cols)};
  for (int a = 0; a < out.capacity.rows; ++a) {
    for (int t = 0; t < out.capacity.cols; ++t) out.capacity(a, t) = f.catalog.value(sol.x, {Var::CVPR, a, t});
  }
  return out;
}

}  // namespace

ExPostResult evaluate_ex_post(const Instance& inst, const Schedule& schedule, const CaseConfig& base,
                              const ExPostOptions& options) {
  const int K = static_cast<int>(inst.contingencies.size());
  std::vector<int> all(K);
  for (int k = 0; k < K; ++k) all[k] = k;

  std::vector<Recourse> parts(K);
  std::vector<std::exception_ptr> errors(K);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < K; k = next++) {
      try {
        parts[k] = solve_one(inst, schedule, base, k, options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(options.threads, 1, std::max(1, K));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Merge in contingency order so the result does not depend on scheduling.
  ExPostResult out;
  out.schedule = schedule;
  out.response = ContingencyResponse::zeros(inst, all);
  for (int k = 0; k < K; ++k) {
    const auto& r = parts[k].response;
    for (int t = 0; t < out.response.delta_f.cols; ++t) out.response.delta_f(k, t) = r.delta_f(0, t);
    out.response.unit_response[k] = r.unit_response[0];
    out.response.unserved[k] = r.unserved[0];
    out.response.pev_response[k] = r.pev_response[0];
    out.response.pev_charge_reduction[k] = r.pev_charge_reduction[0];
    out.response.pev_discharge[k] = r.pev_discharge[0];
    out.response.e_charge_pr[k] = r.e_charge_pr[0];
    out.response.e_discharge_pr[k] = r.e_discharge_pr[0];
    out.response.soc[k] = r.soc[0];
    if (options.pev_reserve) {
      auto& cap = out.schedule.capacity_reserved;
      for (std::size_t i = 0; i < cap.data.size(); ++i) cap.data[i] = std::max(cap.data[i], parts[k].capacity.data[i]);
    }
  }
  out.report = cost_report(inst, base, out.schedule, out.response);
  return out;
}

}  // namespace gridsched
