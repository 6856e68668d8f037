#include "gridsched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridsched/error.hpp"

namespace gridsched {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "IO";
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Schema: return "SCHEMA";
    case ErrorCode::Validation: return "VALIDATION";
    case ErrorCode::InvalidModel: return "INVALID_MODEL";
    case ErrorCode::UnknownRow: return "UNKNOWN_ROW";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::PatternLimit: return "PATTERN_LIMIT";
    case ErrorCode::Solver: return "SOLVER";
    case ErrorCode::Argument: return "ARGUMENT";
  }
  return "UNKNOWN";
}

}  // namespace gridsched

namespace gridsched::milp {

std::string_view to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::NumericalFailure: return "NumericalFailure";
    case LpStatus::IterationLimit: return "IterationLimit";
    case LpStatus::Cutoff: return "Cutoff";
  }
  return "Unknown";
}

std::string_view to_string(MipStatus status) noexcept {
  switch (status) {
    case MipStatus::Optimal: return "Optimal";
    case MipStatus::Feasible: return "Feasible";
    case MipStatus::Infeasible: return "Infeasible";
    case MipStatus::GapLimit: return "GapLimit";
    case MipStatus::NodeLimit: return "NodeLimit";
    case MipStatus::TimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

int Model::add_column(double lower, double upper, double cost, bool binary,
                      std::string name) {
  columns_.push_back(Column{lower, upper, cost, binary});
  column_names_.push_back(std::move(name));
  return num_columns() - 1;
}

int Model::add_row(std::span<const Entry> entries, Sense sense, double rhs,
                   std::string name) {
  std::vector<Entry> merged(entries.begin(), entries.end());
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Entry& a, const Entry& b) { return a.column < b.column; });
  std::size_t out = 0;
  for (std::size_t k = 0; k < merged.size(); ++k) {
    if (merged[k].column < 0 || merged[k].column >= num_columns()) {
      throw Error(ErrorCode::InvalidModel,
                  "row '" + name + "' references unknown column " +
                      std::to_string(merged[k].column));
    }
    if (out > 0 && merged[out - 1].column == merged[k].column) {
      merged[out - 1].value += merged[k].value;
    } else {
      merged[out++] = merged[k];
    }
  }
  merged.resize(out);
  std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });
  entries_.insert(entries_.end(), merged.begin(), merged.end());
  row_start_.push_back(static_cast<int>(entries_.size()));
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

std::span<const Entry> Model::row(int i) const {
  const auto begin = static_cast<std::size_t>(row_start_.at(i));
  const auto end = static_cast<std::size_t>(row_start_.at(i + 1));
  return std::span<const Entry>(entries_).subspan(begin, end - begin);
}

void Model::set_bounds(int j, double lower, double upper) {
  auto& c = columns_.at(j);
  c.lower = lower;
  c.upper = upper;
}

void Model::set_cost(int j, double cost) { columns_.at(j).cost = cost; }

int Model::num_binaries() const {
  return static_cast<int>(
      std::count_if(columns_.begin(), columns_.end(), [](const Column& c) { return c.binary; }));
}

std::vector<std::string> Model::check() const {
  std::vector<std::string> issues;
  auto describe_col = [&](int j) {
    return column_names_[j].empty() ? "column " + std::to_string(j)
                                    : "column '" + column_names_[j] + "'";
  };
  auto describe_row = [&](int i) {
    return row_names_[i].empty() ? "row " + std::to_string(i) : "row '" + row_names_[i] + "'";
  };
  for (int j = 0; j < num_columns(); ++j) {
    const auto& c = columns_[j];
    if (std::isnan(c.lower) || std::isnan(c.upper) || !std::isfinite(c.cost)) {
      issues.push_back(describe_col(j) + ": NaN bound or non-finite cost");
      continue;
    }
    if (c.lower > c.upper) issues.push_back(describe_col(j) + ": lower bound exceeds upper bound");
    if (c.lower == kInf || c.upper == -kInf) issues.push_back(describe_col(j) + ": empty domain");
    if (c.binary && (c.lower < 0.0 || c.upper > 1.0)) {
      issues.push_back(describe_col(j) + ": binary bounds outside [0,1]");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rhs_[i])) issues.push_back(describe_row(i) + ": non-finite rhs");
    for (const auto& e : row(i)) {
      if (!std::isfinite(e.value)) {
        issues.push_back(describe_row(i) + ": non-finite coefficient");
        break;
      }
    }
  }
  if (!std::isfinite(offset_)) issues.emplace_back("objective offset is not finite");
  return issues;
}

double Model::objective_value(std::span<const double> x) const {
  double z = offset_;
  for (int j = 0; j < num_columns(); ++j) z += columns_[j].cost * x[j];
  return z;
}

double Model::row_activity(int i, std::span<const double> x) const {
  double a = 0.0;
  for (const auto& e : row(i)) a += e.value * x[e.column];
  return a;
}

Model fix_binaries(const Model& model, std::span<const std::pair<int, int>> assignment) {
  Model fixed = model;
  for (const auto& [col, value] : assignment) {
    if (col < 0 || col >= model.num_columns() || !model.column(col).binary) {
      throw Error(ErrorCode::Argument,
                  "fix_binaries: column " + std::to_string(col) + " is not binary");
    }
    if (value != 0 && value != 1) {
      throw Error(ErrorCode::Argument, "fix_binaries: value must be 0 or 1");
    }
    fixed.set_bounds(col, value, value);
  }
  return fixed;
}

}  // namespace gridsched::milp
