#pragma once

// Instance files (JSON), result bundles (CSV + JSON) and free MPS export.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gridsched/domain.hpp"
#include "gridsched/error.hpp"
#include "gridsched/evaluate.hpp"
#include "gridsched/milp.hpp"

namespace gridsched::io {

/// Raised by the instance reader. code() is Io, Parse, Schema or Validation;
/// problems() lists every schema or validation finding with its JSON pointer.
class InstanceError : public Error {
 public:
  InstanceError(ErrorCode code, const std::string& message, std::vector<Violation> problems = {})
      : Error(code, message), problems_(std::move(problems)) {}
  const std::vector<Violation>& problems() const noexcept { return problems_; }

 private:
  std::vector<Violation> problems_;
};

Instance parse_instance(std::string_view json);
Instance read_instance(const std::filesystem::path& path);
std::string serialize_instance(const Instance& instance);
void write_instance(const Instance& instance, const std::filesystem::path& path);

struct RunInfo {
  std::string status;  // MipStatus name
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  long nodes = 0;
  double seconds = 0.0;
  int rows = 0;
  int columns = 0;
  long seed = 0;
  milp::SolverConfig solver;
};

struct ResultBundle {
  CaseConfig config;
  Schedule schedule;
  ContingencyResponse response;
  CostReport report;
  RunInfo run;
};

ResultBundle make_bundle(const CaseResult& result, const milp::SolverConfig& solver, long seed = 0);

/// Writes schedule.csv, pev.csv, soc.csv, pfr.csv, freq.csv, unserved.csv,
/// network.csv, costs.json and meta.json into dir, creating it if needed.
void write_results(const Instance& instance, const ResultBundle& bundle, const std::filesystem::path& dir);

/// Reads a bundle back against the instance it was produced from.
ResultBundle read_results(const Instance& instance, const std::filesystem::path& dir);

/// Fixed column order of comparison.csv.
std::string comparison_header();
std::string comparison_row(const CaseConfig& config, const CostReport& report);

std::string format_number(double v);  // %.9g, no negative zero

void write_mps(const milp::Model& model, std::ostream& out, std::string_view name = "GRIDSCHED");
void export_mps(const milp::Model& model, const std::filesystem::path& path);
/// Minimal free-MPS reader for the subset write_mps produces.
milp::Model read_mps(std::istream& in);
milp::Model read_mps(const std::filesystem::path& path);

}  // namespace gridsched::io
