#pragma once

// Verification and reporting on top of a solved formulation.

#include <string>
#include <utility>
#include <vector>

#include "gridsched/domain.hpp"
#include "gridsched/formulation.hpp"
#include "gridsched/milp.hpp"

namespace gridsched {

/// Dense row-major table; rows are entities, columns are periods.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  bool operator==(const Matrix&) const = default;
};

/// Pre-contingency decisions. Units follow InstanceIndex numbering; PEV
/// tables are indexed by charge point and are zero outside the window.
struct Schedule {
  Matrix p, u, spill, startup_cost, shutdown_cost;  // [unit][t]
  Matrix flow;                                      // [line][t]
  Matrix angle;                                     // [bus][t]
  Matrix unserved;                                  // [consumer][t]
  Matrix e_charge, e_discharge, capacity_reserved;  // [charge point][t]
  Matrix soc;                                       // pre-contingency path

  static Schedule zeros(const Instance& instance);
};

/// Recourse per modeled contingency; vectors run parallel to `contingencies`.
struct ContingencyResponse {
  std::vector<int> contingencies;  // 0-based instance indices
  Matrix delta_f;                  // [position][t]
  std::vector<Matrix> unit_response;       // [g][t]
  std::vector<Matrix> unserved;            // [d][t]
  std::vector<Matrix> pev_response;        // p^V,PR [cp][t]
  std::vector<Matrix> pev_charge_reduction;  // p^V,PRC
  std::vector<Matrix> pev_discharge;         // p^V,PRD
  std::vector<Matrix> e_charge_pr;           // e^C,PR
  std::vector<Matrix> e_discharge_pr;        // e^D,PR
  std::vector<Matrix> soc;                   // e^V per contingency

  static ContingencyResponse zeros(const Instance& instance, std::vector<int> contingencies);
};

struct CostReport {
  double production = 0.0;
  double startup = 0.0;
  double shutdown = 0.0;
  double unserved = 0.0;
  double spill = 0.0;
  double unserved_pr = 0.0;
  double frequency = 0.0;
  double pev_capacity = 0.0;
  double pev_deployment = 0.0;
  double total = 0.0;

  double component_sum() const {
    return production + startup + shutdown + unserved + spill + unserved_pr + frequency +
           pev_capacity + pev_deployment;
  }
};

Schedule extract_schedule(const Instance& instance, const Formulation& f, const std::vector<double>& x);
ContingencyResponse extract_response(const Instance& instance, const Formulation& f,
                                     const std::vector<double>& x);

struct Residual {
  std::string equation;
  std::vector<std::pair<char, int>> indices;  // 1-based, as in ConstraintTag
  double residual = 0.0;                      // scaled violation

  std::string describe() const;
};

/// Recomputes every equation of the case from the instance and the values,
/// without looking at any model rows. Contingency equations are checked for
/// every contingency present in `response`; PEV response is capped by
/// schedule.capacity_reserved, which must be zero under GeneratorsOnly.
std::vector<Residual> check_feasibility(const Instance& instance, const CaseConfig& config,
                                        const Schedule& schedule,
                                        const ContingencyResponse& response,
                                        double tolerance = 1e-6);

CostReport cost_report(const Instance& instance, const CaseConfig& config, const Schedule& schedule,
                       const ContingencyResponse& response);

struct ExPostOptions {
  bool pev_reserve = false;  // let PEVs respond in the recourse LP
  int threads = 1;
  milp::SolverConfig solver;
};

struct ExPostResult {
  ContingencyResponse response;
  CostReport report;
  Schedule schedule;  // input schedule; capacity_reserved filled when PEVs respond
};

/// Post-contingency recourse of a reserve-blind schedule. Throws Error(Solver)
/// if a recourse LP is not solved to optimality.
ExPostResult evaluate_ex_post(const Instance& instance, const Schedule& schedule,
                              const CaseConfig& base, const ExPostOptions& options = {});

struct BruteForceResult {
  bool feasible = false;
  double objective = milp::kInf;
  std::vector<double> x;  // columns of build(instance, config)
  long patterns = 0;      // enumerated
  long solved = 0;        // passed the commitment screen and reached the LP
};

/// Enumerates every commitment pattern and solves the remaining LP. Throws
/// Error(PatternLimit) when 2^(units*periods) exceeds max_patterns.
BruteForceResult brute_force_commitment(const Instance& instance, const CaseConfig& config,
                                        long max_patterns = 1L << 14,
                                        const milp::SolverConfig& solver = {});

/// True when the 0/1 pattern u[g][t] of conventional units satisfies the
/// initial-state, minimum up and minimum down rules.
bool commitment_rules_hold(const Instance& instance, const Matrix& u);

/// End-to-end solve of one case: build, branch and bound, extraction, and the
/// ex-post recourse for NoReserve.
struct CaseResult {
  CaseConfig config;
  milp::MipSolution mip;
  Schedule schedule;
  ContingencyResponse response;
  CostReport report;
  double seconds = 0.0;
  int rows = 0;
  int columns = 0;
};

/// Commitment of a schedule as SolverConfig::start_binaries for model f.
std::vector<double> commitment_start(const Formulation& f, const Schedule& schedule);

CaseResult solve_case(const Instance& instance, const CaseConfig& config,
                      const milp::SolverConfig& solver = {}, const ExPostOptions& ex_post = {});

}  // namespace gridsched
