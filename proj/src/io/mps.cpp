#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gridsched/io.hpp"

namespace gridsched::io {

namespace {

constexpr const char* kObjective = "OBJ";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

std::vector<std::string> names_of(int n, const std::function<const std::string&(int)>& get, char prefix) {
  std::vector<std::string> out(n);
  std::set<std::string> seen{kObjective};
  for (int i = 0; i < n; ++i) {
    out[i] = get(i).empty() ? prefix + std::to_string(i + 1) : get(i);
    if (out[i].find_first_of(" \t\n") != std::string::npos) {
      throw Error(ErrorCode::InvalidModel, "MPS names cannot contain whitespace: '" + out[i] + "'");
    }
    if (!seen.insert(out[i]).second) throw Error(ErrorCode::InvalidModel, "duplicate MPS name '" + out[i] + "'");
  }
  return out;
}

}  // namespace

void write_mps(const milp::Model& m, std::ostream& out, std::string_view name) {
  const int n = m.num_columns();
  const int rows = m.num_rows();
  const auto cols = names_of(n, [&](int j) -> const std::string& { return m.column_name(j); }, 'C');
  const auto rnames = names_of(rows, [&](int i) -> const std::string& { return m.row_name(i); }, 'R');

  // Column-major view of the row-major model.
  std::vector<std::vector<std::pair<int, double>>> by_col(n);
  for (int i = 0; i < rows; ++i) {
    for (const auto& e : m.row(i)) by_col[e.column].emplace_back(i, e.value);
  }

  out << "NAME " << name << "\n";
  out << "OBJSENSE\n    MIN\n";
  out << "ROWS\n";
  out << " N  " << kObjective << "\n";
  for (int i = 0; i < rows; ++i) {
    const char* s = m.row_sense(i) == milp::Sense::LessEqual ? "L" : m.row_sense(i) == milp::Sense::Equal ? "E" : "G";
    out << " " << s << "  " << rnames[i] << "\n";
  }
  out << "COLUMNS\n";
  for (int j = 0; j < n; ++j) {
    const auto& c = m.column(j);
    // An empty column still needs one line to exist for a reader.
    if (c.cost != 0.0 || by_col[j].empty()) {
      out << "    " << cols[j] << "  " << kObjective << "  " << num(c.cost) << "\n";
    }
    for (auto [i, v] : by_col[j]) out << "    " << cols[j] << "  " << rnames[i] << "  " << num(v) << "\n";
  }
  out << "RHS\n";
  if (m.objective_offset() != 0.0) out << "    RHS  " << kObjective << "  " << num(-m.objective_offset()) << "\n";
  for (int i = 0; i < rows; ++i) {
    if (m.row_rhs(i) != 0.0) out << "    RHS  " << rnames[i] << "  " << num(m.row_rhs(i)) << "\n";
  }
  out << "RANGES\n";
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const auto& c = m.column(j);
    const std::string& cn = cols[j];
    if (c.binary) {
      out << " BV BND  " << cn << "\n";
      if (c.lower == c.upper) out << " FX BND  " << cn << "  " << num(c.lower) << "\n";
      continue;
    }
    const bool lo_inf = std::isinf(c.lower);
    const bool up_inf = std::isinf(c.upper);
    if (!lo_inf && c.lower == c.upper) {
      out << " FX BND  " << cn << "  " << num(c.lower) << "\n";
    } else if (lo_inf && up_inf) {
      out << " FR BND  " << cn << "\n";
    } else {
      if (lo_inf) out << " MI BND  " << cn << "\n";
      else if (c.lower != 0.0 || c.upper < 0.0) out << " LO BND  " << cn << "  " << num(c.lower) << "\n";
      if (!up_inf) out << " UP BND  " << cn << "  " << num(c.upper) << "\n";
    }
  }
  out << "ENDATA\n";
}

void export_mps(const milp::Model& model, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_mps(model, buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << buf.str()) || !out.flush()) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
}

milp::Model read_mps(std::istream& in) {
  struct RowInfo {
    std::string name;
    milp::Sense sense;
    double rhs = 0.0;
    std::vector<milp::Entry> entries;
  };
  struct ColInfo {
    std::string name;
    double lower = 0.0, upper = milp::kInf, cost = 0.0;
    bool binary = false;
  };
  std::vector<RowInfo> rows;
  std::unordered_map<std::string, int> row_index;
  std::vector<ColInfo> cols;
  std::unordered_map<std::string, int> col_index;
  std::string objective;
  double offset = 0.0;
  bool integer_block = false;

  auto fail = [](int lineno, const std::string& what) -> milp::Model {
    throw Error(ErrorCode::Parse, "MPS line " + std::to_string(lineno) + ": " + what);
  };
  auto value = [&](const std::string& s, int lineno) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(lineno, "bad number '" + s + "'");
    return 0.0;
  };
  auto column = [&](const std::string& name) {
    auto [it, fresh] = col_index.emplace(name, static_cast<int>(cols.size()));
    if (fresh) {
      cols.push_back({name});
      if (integer_block) {
        cols.back().binary = true;
        cols.back().upper = 1.0;
      }
    }
    return it->second;
  };

  std::string section, line;
  int lineno = 0;
  bool done = false;
  while (!done && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      section = tok[0];
      if (section == "ENDATA") done = true;
      else if (section == "OBJSENSE" && tok.size() > 1 && tok[1] != "MIN") return fail(lineno, "only MIN is supported");
      continue;
    }
    if (section == "OBJSENSE") {
      if (tok[0] != "MIN" && tok[0] != "MINIMIZE") return fail(lineno, "only MIN is supported");
    } else if (section == "ROWS") {
      if (tok.size() != 2) return fail(lineno, "expected type and name");
      if (tok[0] == "N") {
        if (objective.empty()) objective = tok[1];
        continue;
      }
      milp::Sense s;
      if (tok[0] == "L") s = milp::Sense::LessEqual;
      else if (tok[0] == "E") s = milp::Sense::Equal;
      else if (tok[0] == "G") s = milp::Sense::GreaterEqual;
      else return fail(lineno, "unknown row type '" + tok[0] + "'");
      if (!row_index.emplace(tok[1], static_cast<int>(rows.size())).second) return fail(lineno, "duplicate row");
      rows.push_back({tok[1], s, 0.0, {}});
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        integer_block = tok[2] == "'INTORG'";
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5) return fail(lineno, "expected column, row, value pairs");
      const int j = column(tok[0]);
      for (std::size_t p = 1; p + 1 < tok.size(); p += 2) {
        const double v = value(tok[p + 1], lineno);
        if (tok[p] == objective) {
          cols[j].cost += v;
        } else {
          auto it = row_index.find(tok[p]);
          if (it == row_index.end()) return fail(lineno, "unknown row '" + tok[p] + "'");
          rows[it->second].entries.push_back({j, v});
        }
      }
    } else if (section == "RHS") {
      if (tok.size() != 3 && tok.size() != 5) return fail(lineno, "expected set, row, value");
      for (std::size_t p = 1; p + 1 < tok.size(); p += 2) {
        const double v = value(tok[p + 1], lineno);
        if (tok[p] == objective) {
          offset = -v;
        } else {
          auto it = row_index.find(tok[p]);
          if (it == row_index.end()) return fail(lineno, "unknown row '" + tok[p] + "'");
          rows[it->second].rhs = v;
        }
      }
    } else if (section == "RANGES") {
      return fail(lineno, "RANGES entries are not supported");
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) return fail(lineno, "expected type, set, column");
      auto it = col_index.find(tok[2]);
      if (it == col_index.end()) return fail(lineno, "unknown column '" + tok[2] + "'");
      auto& c = cols[it->second];
      const std::string& type = tok[0];
      const bool needs_value = type == "UP" || type == "LO" || type == "FX";
      if (needs_value && tok.size() != 4) return fail(lineno, "bound needs a value");
      if (type == "UP") c.upper = value(tok[3], lineno);
      else if (type == "LO") c.lower = value(tok[3], lineno);
      else if (type == "FX") c.lower = c.upper = value(tok[3], lineno);
      else if (type == "FR") c.lower = -milp::kInf, c.upper = milp::kInf;
      else if (type == "MI") c.lower = -milp::kInf;
      else if (type == "PL") c.upper = milp::kInf;
      else if (type == "BV") c.binary = true, c.lower = 0.0, c.upper = 1.0;
      else return fail(lineno, "unsupported bound type '" + type + "'");
    } else if (section != "NAME") {
      return fail(lineno, "unexpected data in section '" + section + "'");
    }
  }
  if (!done) throw Error(ErrorCode::Parse, "MPS: missing ENDATA");

  milp::Model m;
  for (const auto& c : cols) m.add_column(c.lower, c.upper, c.cost, c.binary, c.name);
  for (const auto& r : rows) m.add_row(r.entries, r.sense, r.rhs, r.name);
  m.set_objective_offset(offset);
  return m;
}

milp::Model read_mps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_mps(in);
}

}  // namespace gridsched::io
