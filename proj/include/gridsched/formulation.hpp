#pragma once

// Compiles an Instance and a study case into a MILP with traceable rows and
// columns.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsched/domain.hpp"
#include "gridsched/milp.hpp"

namespace gridsched {

enum class CaseMode : std::uint8_t {
  NoReserve,          // case 1
  GeneratorsOnly,     // case 2
  GeneratorsAndPevs,  // case 3
};

std::string_view to_string(CaseMode mode) noexcept;
/// 1, 2 or 3; throws Error(Argument) otherwise.
CaseMode case_from_number(int number);
int case_number(CaseMode mode) noexcept;

struct CaseConfig {
  CaseMode mode = CaseMode::GeneratorsAndPevs;
  /// Charge the frequency penalty once per consumer, as the objective is
  /// literally written, instead of once per (t,k).
  bool per_consumer_freq_penalty = false;
  /// Price PEV deployment as Cp * p (MW) instead of Cp * d_pr * p (MWh).
  bool literal_deployment_cost = false;
  /// Contingencies to model (0-based). Empty optional means all of them.
  std::optional<std::vector<int>> contingencies;
};

/// Variable families; names follow the printed symbols.
enum class Var : std::uint8_t {
  P,       // p_gt
  S,       // spill s_gt (renewables)
  U,       // u_gt (conventional, binary)
  CSU,     // startup cost
  CSD,     // shutdown cost
  PL,      // line flow
  Theta,   // bus angle
  PUD,     // pre-contingency unserved, per consumer
  PPR,     // unit PFR p^PR_gtk
  PUDPR,   // post-contingency unserved
  DF,      // frequency deviation
  EC,      // PEV charge energy e^C_vnt
  ED,      // PEV discharge energy
  EV,      // SOC e^V_vntk, k = -1 is the pre-contingency path
  ECPR,    // charge reduction energy
  EDPR,    // extra discharge energy
  PPRC,    // PFR by charge reduction
  PPRD,    // PFR by discharge
  PVPR,    // total PEV PFR
  CVPR,    // reserved PEV capacity
};

std::string_view symbol(Var family) noexcept;

/// Index tuple of one column. Fields that do not apply are -1. For PEV
/// families `a` is the charge point (see InstanceIndex::charge_points).
struct VarKey {
  Var family = Var::P;
  int a = -1;  // unit, line, bus, consumer or charge point
  int t = -1;
  int k = -1;  // contingency; for EV, -1 is the pre-contingency path

  auto operator<=>(const VarKey&) const = default;
};

/// Bijection between index tuples and model columns.
class VariableCatalog {
 public:
  int add(const VarKey& key, int column);
  /// Column of key, or -1 when the variable does not exist.
  int find(const VarKey& key) const;
  int at(const VarKey& key) const;  // throws Error(Argument)
  const VarKey& key(int column) const { return keys_.at(column); }
  int size() const { return static_cast<int>(keys_.size()); }
  /// Value of the variable in x, 0 when absent.
  double value(const std::vector<double>& x, const VarKey& key) const {
    const int j = find(key);
    return j < 0 ? 0.0 : x[j];
  }

 private:
  std::map<VarKey, int> index_;
  std::vector<VarKey> keys_;
};

/// Equation id and 1-based indices of a generated row.
struct ConstraintTag {
  std::string equation;  // "Eq2", "Eq18", "UDCAP"
  std::string variant;   // "L"/"U" for the two sides of Eq5, else empty
  std::vector<std::pair<char, int>> indices;

  std::string name() const;  // e.g. EQ5L_g1_t1
  bool operator==(const ConstraintTag&) const = default;
};

struct Formulation {
  milp::Model model;
  VariableCatalog catalog;
  std::vector<ConstraintTag> tags;  // one per row
  CaseConfig config;
  std::vector<int> contingencies;   // modeled contingencies, 0-based
};

/// Throws Error(Validation) when validate(instance) is not empty.
Formulation build(const Instance& instance, const CaseConfig& config);

/// Tag of row `row`; throws Error(UnknownRow).
const ConstraintTag& explain(const Formulation& formulation, int row);

/// Rows per equation id.
std::map<std::string, int> row_counts(const Formulation& formulation);
/// Columns per variable family.
std::map<std::string, int> column_counts(const Formulation& formulation);

}  // namespace gridsched
