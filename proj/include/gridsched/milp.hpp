#pragma once

// Self-contained MILP kernel: a sparse model container, a bounded-variable
// revised simplex for the LP relaxation and a deterministic branch-and-bound
// over binary columns.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gridsched::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : std::uint8_t { LessEqual, Equal, GreaterEqual };

struct Column {
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
  bool binary = false;
};

struct Entry {
  int column = 0;
  double value = 0.0;
};

/// Minimization model with sparse rows. Duplicate column references within a
/// row are merged when the row is added and exact zeros are dropped.
class Model {
 public:
  int add_column(double lower, double upper, double cost, bool binary = false,
                 std::string name = {});
  int add_row(std::span<const Entry> entries, Sense sense, double rhs,
              std::string name = {});

  int num_columns() const { return static_cast<int>(columns_.size()); }
  int num_rows() const { return static_cast<int>(senses_.size()); }
  std::size_t num_nonzeros() const { return entries_.size(); }

  const Column& column(int j) const { return columns_.at(j); }
  std::span<const Entry> row(int i) const;
  Sense row_sense(int i) const { return senses_.at(i); }
  double row_rhs(int i) const { return rhs_.at(i); }
  const std::string& column_name(int j) const { return column_names_.at(j); }
  const std::string& row_name(int i) const { return row_names_.at(i); }

  void set_bounds(int j, double lower, double upper);
  void set_cost(int j, double cost);
  double objective_offset() const { return offset_; }
  void set_objective_offset(double offset) { offset_ = offset; }

  int num_binaries() const;

  /// Invariant violations (NaN or infinite coefficients, binary bounds
  /// outside [0,1], crossed bounds). Empty when the model is well formed.
  std::vector<std::string> check() const;

  /// c^T x + offset.
  double objective_value(std::span<const double> x) const;
  /// Activity a_i^T x of row i.
  double row_activity(int i, std::span<const double> x) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::string> column_names_;
  std::vector<int> row_start_{0};
  std::vector<Entry> entries_;
  std::vector<Sense> senses_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
  double offset_ = 0.0;
};

enum class BranchRule : std::uint8_t { MostFractional, FirstFractional };
enum class NodeOrder : std::uint8_t { BestBound, DepthFirst };

struct SolverConfig {
  double rel_gap = 1e-6;
  double abs_gap = 1e-6;
  double int_tol = 1e-5;
  /// Primal feasibility tolerance, scaled by max(1, |bound|).
  double feas_tol = 1e-8;
  /// Dual feasibility tolerance, scaled by max(1, |c_j|).
  double opt_tol = 1e-9;
  long node_limit = 1'000'000;
  double time_limit = 3600.0;  // seconds
  BranchRule branch_rule = BranchRule::MostFractional;
  NodeOrder node_order = NodeOrder::BestBound;
  /// Consecutive degenerate pivots before Bland's rule takes over.
  int stall_threshold = 1000;
  long max_lp_iterations = 5'000'000;
  int refactor_interval = 100;
  /// Fixed-column substitution and empty-row removal.
  bool presolve = true;
  /// Optional 0/1 values for the binary columns (in column order of the
  /// binaries) tried as a first incumbent.
  std::vector<double> start_binaries;
};

enum class LpStatus : std::uint8_t {
  Optimal,
  Infeasible,
  Unbounded,
  NumericalFailure,
  IterationLimit,
  Cutoff,
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> x;               // per column
  std::vector<double> row_duals;       // per row, d obj / d rhs
  std::vector<double> reduced_costs;   // per column
  /// Infeasible: y over rows with max_{box} sum_j (y^T a_j) x_j - sum_i y_i r_i < 0.
  std::vector<double> farkas;
  /// Unbounded: improving direction over columns.
  std::vector<double> primal_ray;
  long iterations = 0;
};

enum class MipStatus : std::uint8_t {
  Optimal,
  Feasible,
  Infeasible,
  GapLimit,
  NodeLimit,
  TimeLimit,
};

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  double objective = kInf;
  double best_bound = -kInf;
  double gap = kInf;
  double root_bound = -kInf;
  std::vector<double> x;
  long nodes = 0;
  long lp_iterations = 0;
  /// Best bound after each processed node; non-decreasing.
  std::vector<double> bound_trace;
};

std::string_view to_string(LpStatus status) noexcept;
std::string_view to_string(MipStatus status) noexcept;

/// Solves the LP relaxation (binary flags ignored).
LpSolution solve_lp(const Model& model, const SolverConfig& config = {});

MipSolution solve_mip(const Model& model, const SolverConfig& config = {});

/// Copy of `model` with the listed binary columns pinned to 0 or 1. Throws
/// Error(Argument) for a non-binary column or a value outside {0,1}.
Model fix_binaries(const Model& model,
                   std::span<const std::pair<int, int>> assignment);

/// Repeated LP solves of one model under changing column bounds, warm started
/// from the previous optimal basis. Used by enumeration oracles.
class IncrementalLp {
 public:
  IncrementalLp(const Model& model, const SolverConfig& config = {});
  ~IncrementalLp();
  IncrementalLp(IncrementalLp&&) noexcept;
  IncrementalLp& operator=(IncrementalLp&&) noexcept;

  void set_bounds(int column, double lower, double upper);
  LpSolution solve();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gridsched::milp
