#include <bit>
#include <chrono>
#include <cmath>

#include "gridsched/error.hpp"
#include "gridsched/evaluate.hpp"

namespace gridsched {

BruteForceResult brute_force_commitment(const Instance& inst, const CaseConfig& config,
                                        long max_patterns, const milp::SolverConfig& solver) {
  const Formulation f = build(inst, config);
  const int T = inst.system.n_periods;
  const int Gc = static_cast<int>(inst.conventional_units.size());
  const int bits = Gc * T;
  if (bits >= 62 || (1L << bits) > max_patterns) {
    throw Error(ErrorCode::PatternLimit, "2^" + std::to_string(bits) + " commitment patterns exceed the limit of " +
                                             std::to_string(max_patterns));
  }
  std::vector<int> cols(bits);
  for (int g = 0; g < Gc; ++g) {
    for (int t = 0; t < T; ++t) cols[g * T + t] = f.catalog.at({Var::U, g, t});
  }

  milp::IncrementalLp lp(f.model, solver);
  Matrix u(Gc, T);
  for (int c : cols) lp.set_bounds(c, 0.0, 0.0);

  // Gray code order: each step flips one commitment bit.
  BruteForceResult out;
  const long total = 1L << bits;
  for (long i = 0; i < total; ++i) {
    if (i > 0) {
      const int b = std::countr_zero(static_cast<unsigned long>(i));
      double& v = u.data[b];
      v = 1.0 - v;
      lp.set_bounds(cols[b], v, v);
    }
    ++out.patterns;
    if (!commitment_rules_hold(inst, u)) continue;
    ++out.solved;
    const auto sol = lp.solve();
    if (sol.status == milp::LpStatus::Optimal && sol.objective < out.objective) {
      out.feasible = true;
      out.objective = sol.objective;
      out.x = sol.x;
    } else if (sol.status != milp::LpStatus::Optimal && sol.status != milp::LpStatus::Infeasible) {
      throw Error(ErrorCode::Solver, "pattern LP ended " + std::string(milp::to_string(sol.status)));
    }
  }
  return out;
}

std::vector<double> commitment_start(const Formulation& f, const Schedule& schedule) {
  std::vector<double> out;
  for (int j = 0; j < f.model.num_columns(); ++j) {
    if (!f.model.column(j).binary) continue;
    const auto& key = f.catalog.key(j);
    out.push_back(std::round(schedule.u(key.a, key.t)));
  }
  return out;
}

CaseResult solve_case(const Instance& inst, const CaseConfig& config, const milp::SolverConfig& solver,
                      const ExPostOptions& ex_post) {
  const auto started = std::chrono::steady_clock::now();
  const Formulation f = build(inst, config);
  CaseResult out;
  out.config = config;
  out.rows = f.model.num_rows();
  out.columns = f.model.num_columns();
  out.mip = milp::solve_mip(f.model, solver);
  if (out.mip.has_incumbent) {
    out.schedule = extract_schedule(inst, f, out.mip.x);
    out.response = extract_response(inst, f, out.mip.x);
    if (config.mode == CaseMode::NoReserve) {
      auto ex = evaluate_ex_post(inst, out.schedule, config, ex_post);
      out.schedule = std::move(ex.schedule);
      out.response = std::move(ex.response);
      out.report = ex.report;
    } else {
      out.report = cost_report(inst, config, out.schedule, out.response);
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace gridsched
