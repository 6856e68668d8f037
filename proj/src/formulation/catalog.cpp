#include "gridsched/error.hpp"
#include "gridsched/formulation.hpp"

namespace gridsched {

std::string_view to_string(CaseMode mode) noexcept {
  switch (mode) {
    case CaseMode::NoReserve: return "NoReserve";
    case CaseMode::GeneratorsOnly: return "GeneratorsOnly";
    case CaseMode::GeneratorsAndPevs: return "GeneratorsAndPevs";
  }
  return "?";
}

CaseMode case_from_number(int number) {
  switch (number) {
    case 1: return CaseMode::NoReserve;
    case 2: return CaseMode::GeneratorsOnly;
    case 3: return CaseMode::GeneratorsAndPevs;
    default: throw Error(ErrorCode::Argument, "case must be 1, 2 or 3");
  }
}

int case_number(CaseMode mode) noexcept { return static_cast<int>(mode) + 1; }

std::string_view symbol(Var family) noexcept {
  switch (family) {
    case Var::P: return "p";
    case Var::S: return "s";
    case Var::U: return "u";
    case Var::CSU: return "csu";
    case Var::CSD: return "csd";
    case Var::PL: return "pl";
    case Var::Theta: return "theta";
    case Var::PUD: return "pud";
    case Var::PPR: return "ppr";
    case Var::PUDPR: return "pudpr";
    case Var::DF: return "df";
    case Var::EC: return "ec";
    case Var::ED: return "ed";
    case Var::EV: return "ev";
    case Var::ECPR: return "ecpr";
    case Var::EDPR: return "edpr";
    case Var::PPRC: return "pprc";
    case Var::PPRD: return "pprd";
    case Var::PVPR: return "pvpr";
    case Var::CVPR: return "cvpr";
  }
  return "?";
}

int VariableCatalog::add(const VarKey& key, int column) {
  if (column != size()) throw Error(ErrorCode::Argument, "catalog columns must be added in order");
  if (!index_.emplace(key, column).second) {
    throw Error(ErrorCode::Argument, "duplicate variable key");
  }
  keys_.push_back(key);
  return column;
}

int VariableCatalog::find(const VarKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

int VariableCatalog::at(const VarKey& key) const {
  const int j = find(key);
  if (j < 0) {
    throw Error(ErrorCode::Argument, "no variable " + std::string(symbol(key.family)) + " at a=" +
                                         std::to_string(key.a) + " t=" + std::to_string(key.t) +
                                         " k=" + std::to_string(key.k));
  }
  return j;
}

std::string ConstraintTag::name() const {
  std::string out = "EQ";
  if (equation.rfind("Eq", 0) == 0) out += equation.substr(2);
  else out = equation;
  out += variant;
  for (const auto& [c, v] : indices) {
    out += '_';
    out += c;
    out += std::to_string(v);
  }
  return out;
}

const ConstraintTag& explain(const Formulation& formulation, int row) {
  if (row < 0 || row >= static_cast<int>(formulation.tags.size())) {
    throw Error(ErrorCode::UnknownRow, "UNKNOWN_ROW: no row " + std::to_string(row));
  }
  return formulation.tags[row];
}

std::map<std::string, int> row_counts(const Formulation& formulation) {
  std::map<std::string, int> out;
  for (const auto& t : formulation.tags) ++out[t.equation];
  return out;
}

std::map<std::string, int> column_counts(const Formulation& formulation) {
  std::map<std::string, int> out;
  for (int j = 0; j < formulation.catalog.size(); ++j) {
    ++out[std::string(symbol(formulation.catalog.key(j).family))];
  }
  return out;
}

}  // namespace gridsched
