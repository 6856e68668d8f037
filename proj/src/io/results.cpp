#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gridsched/io.hpp"
#include "json.hpp"

namespace gridsched::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v + 0.0);  // + 0.0 turns -0 into 0
  return buf;
}

namespace {

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
  void header(std::string_view h) { out_ << h << '\n'; }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }
  void close() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::Io, "cannot write '" + path_.string() + "'");
  }

 private:
  static std::string cell(const std::string& s) { return quote(s); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(double v) { return format_number(v); }

  fs::path path_;
  std::ofstream out_;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  return cells;
}

// Rows of a CSV with a known header; each row is handed over as cells.
template <class F>
void read_csv(const fs::path& path, std::string_view expected_header, F&& on_row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw Error(ErrorCode::Parse, path.filename().string() + ": expected header '" + std::string(expected_header) + "'");
  }
  const std::size_t width = split_csv(line).size();
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != width) {
      throw Error(ErrorCode::Parse, path.filename().string() + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(width) + " fields");
    }
    try {
      on_row(cells);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Parse, path.filename().string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

double number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int period(const std::string& s, int T) {
  const int t = std::stoi(s);
  if (t < 1 || t > T) throw std::out_of_range("period " + s + " out of range");
  return t - 1;
}

template <class Map>
int lookup(const Map& m, const std::string& id, std::string_view what) {
  auto it = m.find(id);
  if (it == m.end()) throw std::invalid_argument("unknown " + std::string(what) + " '" + id + "'");
  return it->second;
}

// Names used in the CSVs for every indexed entity of an instance.
struct Names {
  const Instance& inst;
  InstanceIndex ix;
  std::map<std::string, int> unit, line, bus, consumer, contingency;
  std::map<std::pair<std::string, std::string>, int> charge_point;

  explicit Names(const Instance& i) : inst(i), ix(i) {
    for (int g = 0; g < ix.num_units(); ++g) unit[ix.unit_id(g)] = g;
    for (std::size_t l = 0; l < i.lines.size(); ++l) line[i.lines[l].id] = static_cast<int>(l);
    for (std::size_t n = 0; n < i.buses.size(); ++n) bus[i.buses[n].id] = static_cast<int>(n);
    for (std::size_t d = 0; d < i.consumers.size(); ++d) consumer[i.consumers[d].id] = static_cast<int>(d);
    for (std::size_t k = 0; k < i.contingencies.size(); ++k) contingency[i.contingencies[k].id] = static_cast<int>(k);
    const auto& cps = ix.charge_points();
    for (std::size_t c = 0; c < cps.size(); ++c) charge_point[{group(c), cp_bus(c)}] = static_cast<int>(c);
  }
  const std::string& group(std::size_t c) const { return inst.pev_groups[ix.charge_points()[c].group].id; }
  const std::string& cp_bus(std::size_t c) const { return inst.buses[ix.charge_points()[c].bus].id; }
  bool plugged(std::size_t c, int t) const { return inst.pev_groups[ix.charge_points()[c].group].plugged(t); }
};

constexpr std::string_view kScheduleHeader = "g,t,p,u,spill,startup_cost,shutdown_cost";
constexpr std::string_view kPevHeader = "v,n,t,e_charge,e_discharge,capacity_reserved";
constexpr std::string_view kSocHeader = "v,n,t,k_or_pre,soc";
constexpr std::string_view kPfrHeader =
    "k,t,g_or_group,n,response,charge_reduction,discharge,e_charge_pr,e_discharge_pr";
constexpr std::string_view kFreqHeader = "k,t,delta_f";
constexpr std::string_view kUnservedHeader = "d,t,k_or_pre,value";
constexpr std::string_view kNetworkHeader = "kind,id,t,value";
const std::string kPre = "pre";

json costs_json(const Instance& inst, const CostReport& r) {
  auto z = [](double v) { return v + 0.0; };  // no -0 in the file
  return {{"currency", inst.system.currency},
          {"production", z(r.production)},
          {"startup", z(r.startup)},
          {"shutdown", z(r.shutdown)},
          {"unserved", z(r.unserved)},
          {"spill", z(r.spill)},
          {"unserved_pr", z(r.unserved_pr)},
          {"frequency", z(r.frequency)},
          {"pev_capacity", z(r.pev_capacity)},
          {"pev_deployment", z(r.pev_deployment)},
          {"total", z(r.total)}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.filename().string() + ": " + e.what());
  }
}

}  // namespace

ResultBundle make_bundle(const CaseResult& result, const milp::SolverConfig& solver, long seed) {
  ResultBundle b;
  b.config = result.config;
  b.schedule = result.schedule;
  b.response = result.response;
  b.report = result.report;
  b.run.status = std::string(milp::to_string(result.mip.status));
  b.run.objective = result.mip.objective;
  b.run.best_bound = result.mip.best_bound;
  b.run.gap = result.mip.gap;
  b.run.nodes = result.mip.nodes;
  b.run.seconds = result.seconds;
  b.run.rows = result.rows;
  b.run.columns = result.columns;
  b.run.seed = seed;
  b.run.solver = solver;
  return b;
}

void write_results(const Instance& inst, const ResultBundle& b, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  const Names names(inst);
  const int T = inst.system.n_periods;
  const int G = names.ix.num_units();
  const int C = static_cast<int>(names.ix.charge_points().size());
  const auto& s = b.schedule;
  const auto& r = b.response;

  CsvWriter schedule(dir / "schedule.csv");
  schedule.header(kScheduleHeader);
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < T; ++t) {
      schedule.row(names.ix.unit_id(g), t + 1, s.p(g, t), s.u(g, t), s.spill(g, t), s.startup_cost(g, t),
                   s.shutdown_cost(g, t));
    }
  }
  schedule.close();

  CsvWriter pev(dir / "pev.csv");
  pev.header(kPevHeader);
  for (int c = 0; c < C; ++c) {
    for (int t = 0; t < T; ++t) {
      pev.row(names.group(c), names.cp_bus(c), t + 1, s.e_charge(c, t), s.e_discharge(c, t),
              s.capacity_reserved(c, t));
    }
  }
  pev.close();

  CsvWriter soc(dir / "soc.csv");
  soc.header(kSocHeader);
  for (int c = 0; c < C; ++c) {
    for (int t = 0; t < T; ++t) {
      if (names.plugged(c, t)) soc.row(names.group(c), names.cp_bus(c), t + 1, kPre, s.soc(c, t));
    }
  }
  for (std::size_t p = 0; p < r.contingencies.size(); ++p) {
    const std::string& k = inst.contingencies[r.contingencies[p]].id;
    for (int c = 0; c < C; ++c) {
      for (int t = 0; t < T; ++t) {
        if (names.plugged(c, t)) soc.row(names.group(c), names.cp_bus(c), t + 1, k, r.soc[p](c, t));
      }
    }
  }
  soc.close();

  CsvWriter pfr(dir / "pfr.csv");
  pfr.header(kPfrHeader);
  CsvWriter freq(dir / "freq.csv");
  freq.header(kFreqHeader);
  for (std::size_t p = 0; p < r.contingencies.size(); ++p) {
    const std::string& k = inst.contingencies[r.contingencies[p]].id;
    for (int t = 0; t < T; ++t) {
      freq.row(k, t + 1, r.delta_f(static_cast<int>(p), t));
      for (int g = 0; g < G; ++g) {
        pfr.row(k, t + 1, names.ix.unit_id(g), inst.buses[names.ix.unit_bus(g)].id, r.unit_response[p](g, t), 0.0,
                0.0, 0.0, 0.0);
      }
      for (int c = 0; c < C; ++c) {
        pfr.row(k, t + 1, names.group(c), names.cp_bus(c), r.pev_response[p](c, t), r.pev_charge_reduction[p](c, t),
                r.pev_discharge[p](c, t), r.e_charge_pr[p](c, t), r.e_discharge_pr[p](c, t));
      }
    }
  }
  pfr.close();
  freq.close();

  CsvWriter unserved(dir / "unserved.csv");
  unserved.header(kUnservedHeader);
  const int D = static_cast<int>(inst.consumers.size());
  for (int d = 0; d < D; ++d) {
    for (int t = 0; t < T; ++t) unserved.row(inst.consumers[d].id, t + 1, kPre, s.unserved(d, t));
  }
  for (std::size_t p = 0; p < r.contingencies.size(); ++p) {
    const std::string& k = inst.contingencies[r.contingencies[p]].id;
    for (int d = 0; d < D; ++d) {
      for (int t = 0; t < T; ++t) unserved.row(inst.consumers[d].id, t + 1, k, r.unserved[p](d, t));
    }
  }
  unserved.close();

  CsvWriter network(dir / "network.csv");
  network.header(kNetworkHeader);
  for (std::size_t l = 0; l < inst.lines.size(); ++l) {
    for (int t = 0; t < T; ++t) network.row(std::string("flow"), inst.lines[l].id, t + 1, s.flow(static_cast<int>(l), t));
  }
  for (std::size_t n = 0; n < inst.buses.size(); ++n) {
    for (int t = 0; t < T; ++t) {
      network.row(std::string("angle"), inst.buses[n].id, t + 1, s.angle(static_cast<int>(n), t));
    }
  }
  network.close();

  write_text(dir / "costs.json", costs_json(inst, b.report).dump(2) + "\n");

  json ks = json::array();
  for (int k : r.contingencies) ks.push_back(inst.contingencies[k].id);
  const auto& sv = b.run.solver;
  json meta = {{"format_version", inst.system.format_version},
               {"case", case_number(b.config.mode)},
               {"mode", std::string(to_string(b.config.mode))},
               {"per_consumer_freq_penalty", b.config.per_consumer_freq_penalty},
               {"literal_deployment_cost", b.config.literal_deployment_cost},
               {"contingencies", ks},
               {"status", b.run.status},
               {"objective", b.run.objective},
               {"best_bound", b.run.best_bound},
               {"gap", b.run.gap},
               {"nodes", b.run.nodes},
               {"rows", b.run.rows},
               {"columns", b.run.columns},
               {"seed", b.run.seed},
               {"solver",
                {{"rel_gap", sv.rel_gap},
                 {"abs_gap", sv.abs_gap},
                 {"node_limit", sv.node_limit},
                 {"time_limit", sv.time_limit},
                 {"int_tol", sv.int_tol},
                 {"feas_tol", sv.feas_tol},
                 {"presolve", sv.presolve}}},
               {"wall_seconds", b.run.seconds}};
  write_text(dir / "meta.json", meta.dump(2) + "\n");
}

ResultBundle read_results(const Instance& inst, const fs::path& dir) {
  const Names names(inst);
  const int T = inst.system.n_periods;
  ResultBundle b;
  b.schedule = Schedule::zeros(inst);
  auto& s = b.schedule;

  const json meta = read_json(dir / "meta.json");
  const json costs = read_json(dir / "costs.json");
  std::vector<int> ks;
  std::map<std::string, int> position;
  try {
    b.config.mode = case_from_number(meta.at("case").get<int>());
    b.config.per_consumer_freq_penalty = meta.value("per_consumer_freq_penalty", false);
    b.config.literal_deployment_cost = meta.value("literal_deployment_cost", false);
    for (const auto& k : meta.at("contingencies")) {
      position[k.get<std::string>()] = static_cast<int>(ks.size());
      ks.push_back(lookup(names.contingency, k.get<std::string>(), "contingency"));
    }
    if (b.config.mode != CaseMode::NoReserve && ks.size() != inst.contingencies.size()) b.config.contingencies = ks;
    b.run.status = meta.at("status").get<std::string>();
    b.run.objective = meta.at("objective").get<double>();
    b.run.best_bound = meta.at("best_bound").get<double>();
    b.run.gap = meta.at("gap").get<double>();
    b.run.nodes = meta.at("nodes").get<long>();
    b.run.rows = meta.at("rows").get<int>();
    b.run.columns = meta.at("columns").get<int>();
    b.run.seed = meta.at("seed").get<long>();
    b.run.seconds = meta.at("wall_seconds").get<double>();
    auto& r = b.report;
    r.production = costs.at("production").get<double>();
    r.startup = costs.at("startup").get<double>();
    r.shutdown = costs.at("shutdown").get<double>();
    r.unserved = costs.at("unserved").get<double>();
    r.spill = costs.at("spill").get<double>();
    r.unserved_pr = costs.at("unserved_pr").get<double>();
    r.frequency = costs.at("frequency").get<double>();
    r.pev_capacity = costs.at("pev_capacity").get<double>();
    r.pev_deployment = costs.at("pev_deployment").get<double>();
    r.total = costs.at("total").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("meta.json/costs.json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::Parse, std::string("meta.json: ") + e.what());
  }
  b.response = ContingencyResponse::zeros(inst, ks);
  auto& r = b.response;
  auto pos_of = [&](const std::string& k) { return lookup(position, k, "contingency"); };
  auto cp_of = [&](const std::string& v, const std::string& n) {
    auto it = names.charge_point.find({v, n});
    if (it == names.charge_point.end()) throw std::invalid_argument("unknown charge point '" + v + "' at '" + n + "'");
    return it->second;
  };

  read_csv(dir / "schedule.csv", kScheduleHeader, [&](const std::vector<std::string>& c) {
    const int g = lookup(names.unit, c[0], "unit");
    const int t = period(c[1], T);
    s.p(g, t) = number(c[2]);
    s.u(g, t) = number(c[3]);
    s.spill(g, t) = number(c[4]);
    s.startup_cost(g, t) = number(c[5]);
    s.shutdown_cost(g, t) = number(c[6]);
  });
  read_csv(dir / "pev.csv", kPevHeader, [&](const std::vector<std::string>& c) {
    const int cp = cp_of(c[0], c[1]);
    const int t = period(c[2], T);
    s.e_charge(cp, t) = number(c[3]);
    s.e_discharge(cp, t) = number(c[4]);
    s.capacity_reserved(cp, t) = number(c[5]);
  });
  read_csv(dir / "soc.csv", kSocHeader, [&](const std::vector<std::string>& c) {
    const int cp = cp_of(c[0], c[1]);
    const int t = period(c[2], T);
    if (c[3] == kPre) s.soc(cp, t) = number(c[4]);
    else r.soc[pos_of(c[3])](cp, t) = number(c[4]);
  });
  read_csv(dir / "freq.csv", kFreqHeader, [&](const std::vector<std::string>& c) {
    r.delta_f(pos_of(c[0]), period(c[1], T)) = number(c[2]);
  });
  read_csv(dir / "pfr.csv", kPfrHeader, [&](const std::vector<std::string>& c) {
    const int p = pos_of(c[0]);
    const int t = period(c[1], T);
    if (auto it = names.unit.find(c[2]); it != names.unit.end()) {
      r.unit_response[p](it->second, t) = number(c[4]);
      return;
    }
    const int cp = cp_of(c[2], c[3]);
    r.pev_response[p](cp, t) = number(c[4]);
    r.pev_charge_reduction[p](cp, t) = number(c[5]);
    r.pev_discharge[p](cp, t) = number(c[6]);
    r.e_charge_pr[p](cp, t) = number(c[7]);
    r.e_discharge_pr[p](cp, t) = number(c[8]);
  });
  read_csv(dir / "unserved.csv", kUnservedHeader, [&](const std::vector<std::string>& c) {
    const int d = lookup(names.consumer, c[0], "consumer");
    const int t = period(c[1], T);
    if (c[2] == kPre) s.unserved(d, t) = number(c[3]);
    else r.unserved[pos_of(c[2])](d, t) = number(c[3]);
  });
  read_csv(dir / "network.csv", kNetworkHeader, [&](const std::vector<std::string>& c) {
    const int t = period(c[2], T);
    if (c[0] == "flow") s.flow(lookup(names.line, c[1], "line"), t) = number(c[3]);
    else if (c[0] == "angle") s.angle(lookup(names.bus, c[1], "bus"), t) = number(c[3]);
    else throw std::invalid_argument("unknown kind '" + c[0] + "'");
  });
  return b;
}

std::string comparison_header() {
  return "case,mode,production,unserved_pr,frequency,pev_capacity,pev_deployment,startup,shutdown,unserved,spill,total";
}

std::string comparison_row(const CaseConfig& config, const CostReport& r) {
  std::string out = std::to_string(case_number(config.mode)) + "," + std::string(to_string(config.mode));
  for (double v : {r.production, r.unserved_pr, r.frequency, r.pev_capacity, r.pev_deployment, r.startup, r.shutdown,
                   r.unserved, r.spill, r.total}) {
    out += "," + format_number(v);
  }
  return out;
}

}  // namespace gridsched::io
