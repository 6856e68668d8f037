#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gridsched/io.hpp"
#include "json.hpp"

namespace gridsched::io {

namespace {

using json = nlohmann::ordered_json;

std::string escape(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string at(const std::string& ptr, std::string_view key) { return ptr + "/" + escape(key); }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

// Walks the document, collecting every shape problem instead of stopping at
// the first one.
class Reader {
 public:
  std::vector<Violation> problems;

  void bad(const std::string& ptr, std::string code, std::string message) {
    problems.push_back({std::move(code), std::move(message), ptr});
  }

  // Object with a fixed key set; unknown keys are reported.
  bool object(const json& j, const std::string& ptr, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) {
      bad(ptr, "SCHEMA_TYPE", "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (auto allowed : keys) known |= allowed == k;
      if (!known) bad(at(ptr, k), "SCHEMA_UNKNOWN_KEY", "unknown key '" + k + "'");
    }
    return true;
  }

  const json* member(const json& obj, const std::string& ptr, std::string_view key, bool required) {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) {
      if (required) bad(at(ptr, key), "SCHEMA_MISSING", "missing required key '" + std::string(key) + "'");
      return nullptr;
    }
    return &*it;
  }

  void number(const json& obj, const std::string& ptr, std::string_view key, double& out, bool required = true) {
    const json* v = member(obj, ptr, key, required);
    if (!v) return;
    if (!v->is_number()) return bad(at(ptr, key), "SCHEMA_TYPE", "expected a number");
    out = v->get<double>();
  }

  void integer(const json& obj, const std::string& ptr, std::string_view key, int& out, bool required = true) {
    const json* v = member(obj, ptr, key, required);
    if (!v) return;
    if (v->is_number_integer()) {
      out = v->get<int>();
    } else if (v->is_number_float() && std::floor(v->get<double>()) == v->get<double>() &&
               std::abs(v->get<double>()) < 1e9) {
      out = static_cast<int>(v->get<double>());
    } else {
      bad(at(ptr, key), "SCHEMA_TYPE", "expected an integer");
    }
  }

  void boolean(const json& obj, const std::string& ptr, std::string_view key, bool& out, bool required = true) {
    const json* v = member(obj, ptr, key, required);
    if (!v) return;
    if (!v->is_boolean()) return bad(at(ptr, key), "SCHEMA_TYPE", "expected true or false");
    out = v->get<bool>();
  }

  void string(const json& obj, const std::string& ptr, std::string_view key, std::string& out, bool required = true) {
    const json* v = member(obj, ptr, key, required);
    if (!v) return;
    if (!v->is_string()) return bad(at(ptr, key), "SCHEMA_TYPE", "expected a string");
    out = v->get<std::string>();
  }

  void numbers(const json& obj, const std::string& ptr, std::string_view key, std::vector<double>& out,
               bool required = true) {
    const json* v = member(obj, ptr, key, required);
    if (!v) return;
    const std::string p = at(ptr, key);
    if (!v->is_array()) return bad(p, "SCHEMA_TYPE", "expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        bad(at(p, i), "SCHEMA_TYPE", "expected a number");
        out.push_back(0.0);
      } else {
        out.push_back((*v)[i].get<double>());
      }
    }
  }

  void strings(const json& obj, const std::string& ptr, std::string_view key, std::vector<std::string>& out,
               bool required = true) {
    const json* v = member(obj, ptr, key, required);
    if (!v) return;
    const std::string p = at(ptr, key);
    if (!v->is_array()) return bad(p, "SCHEMA_TYPE", "expected an array of strings");
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string()) bad(at(p, i), "SCHEMA_TYPE", "expected a string");
      else out.push_back((*v)[i].get<std::string>());
    }
  }

  template <class T>
  void list(const json& doc, std::string_view key, std::vector<T>& out,
            const std::function<void(const json&, const std::string&, T&)>& item) {
    const json* v = member(doc, "", key, true);
    if (!v) return;
    const std::string p = at("", key);
    if (!v->is_array()) return bad(p, "SCHEMA_TYPE", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      T x;
      item((*v)[i], at(p, i), x);
      out.push_back(std::move(x));
    }
  }
};

Instance decode(const json& doc) {
  Reader r;
  Instance inst;
  if (!r.object(doc, "", {"system", "buses", "lines", "conventional_units", "renewable_units", "consumers",
                          "pev_groups", "contingencies"})) {
    throw InstanceError(ErrorCode::Schema, "instance must be a JSON object", r.problems);
  }

  if (const json* s = r.member(doc, "", "system", true)) {
    const std::string p = "/system";
    auto& sys = inst.system;
    if (r.object(*s, p, {"c_unserved", "c_spill", "c_freq", "delta_f_max", "d_pr", "n_periods", "period_length",
                         "currency", "format_version"})) {
      r.number(*s, p, "c_unserved", sys.c_unserved, false);
      r.number(*s, p, "c_spill", sys.c_spill, false);
      r.number(*s, p, "c_freq", sys.c_freq, false);
      r.number(*s, p, "delta_f_max", sys.delta_f_max, false);
      r.number(*s, p, "d_pr", sys.d_pr, false);
      r.integer(*s, p, "n_periods", sys.n_periods, false);
      r.number(*s, p, "period_length", sys.period_length, false);
      r.string(*s, p, "currency", sys.currency, false);
      r.string(*s, p, "format_version", sys.format_version, false);
      if (sys.format_version.substr(0, 2) != "1.") {
        r.bad(p + "/format_version", "SCHEMA_VERSION", "unsupported format_version '" + sys.format_version + "'");
      }
    }
  }

  r.list<Bus>(doc, "buses", inst.buses, [&](const json& j, const std::string& p, Bus& b) {
    if (!r.object(j, p, {"id", "is_slack"})) return;
    r.string(j, p, "id", b.id);
    r.boolean(j, p, "is_slack", b.is_slack, false);
  });
  r.list<Line>(doc, "lines", inst.lines, [&](const json& j, const std::string& p, Line& l) {
    if (!r.object(j, p, {"id", "from_bus", "to_bus", "reactance", "capacity"})) return;
    r.string(j, p, "id", l.id);
    r.string(j, p, "from_bus", l.from_bus);
    r.string(j, p, "to_bus", l.to_bus);
    r.number(j, p, "reactance", l.reactance);
    r.numbers(j, p, "capacity", l.capacity);
  });
  r.list<ConventionalUnit>(doc, "conventional_units", inst.conventional_units,
                           [&](const json& j, const std::string& p, ConventionalUnit& u) {
    if (!r.object(j, p, {"id", "bus", "cost", "p_max", "p_min", "p0", "u0", "su_cost", "sd_cost", "ramp_up",
                         "ramp_down", "min_up", "min_down", "init_must_run", "init_must_stop", "droop"})) {
      return;
    }
    r.string(j, p, "id", u.id);
    r.string(j, p, "bus", u.bus);
    r.number(j, p, "cost", u.cost);
    r.number(j, p, "p_max", u.p_max);
    r.number(j, p, "p_min", u.p_min);
    r.number(j, p, "p0", u.p0);
    r.boolean(j, p, "u0", u.u0);
    r.number(j, p, "su_cost", u.su_cost);
    r.number(j, p, "sd_cost", u.sd_cost);
    r.number(j, p, "ramp_up", u.ramp_up);
    r.number(j, p, "ramp_down", u.ramp_down);
    r.integer(j, p, "min_up", u.min_up);
    r.integer(j, p, "min_down", u.min_down);
    r.integer(j, p, "init_must_run", u.init_must_run);
    r.integer(j, p, "init_must_stop", u.init_must_stop);
    r.number(j, p, "droop", u.droop);
  });
  r.list<RenewableUnit>(doc, "renewable_units", inst.renewable_units,
                        [&](const json& j, const std::string& p, RenewableUnit& u) {
    if (!r.object(j, p, {"id", "bus", "cost", "p_max", "availability"})) return;
    r.string(j, p, "id", u.id);
    r.string(j, p, "bus", u.bus);
    r.number(j, p, "cost", u.cost, false);
    r.number(j, p, "p_max", u.p_max);
    r.numbers(j, p, "availability", u.availability);
  });
  r.list<Consumer>(doc, "consumers", inst.consumers, [&](const json& j, const std::string& p, Consumer& c) {
    if (!r.object(j, p, {"id", "bus", "demand"})) return;
    r.string(j, p, "id", c.id);
    r.string(j, p, "bus", c.bus);
    r.numbers(j, p, "demand", c.demand);
  });
  r.list<PevGroup>(doc, "pev_groups", inst.pev_groups, [&](const json& j, const std::string& p, PevGroup& v) {
    if (!r.object(j, p, {"id", "counts", "e_max", "e_min", "e_initial", "e_final", "p_max", "efficiency",
                         "window_start", "window_end", "droop", "capacity_offer", "deployment_offer",
                         "capacity_offer_by_period", "deployment_offer_by_period"})) {
      return;
    }
    r.string(j, p, "id", v.id);
    if (const json* counts = r.member(j, p, "counts", true)) {
      const std::string cp = p + "/counts";
      if (!counts->is_object()) {
        r.bad(cp, "SCHEMA_TYPE", "expected an object mapping bus id to vehicle count");
      } else {
        for (const auto& [bus, n] : counts->items()) {
          PevCount pc{bus, 0};
          r.integer(*counts, cp, bus, pc.count);
          v.counts.push_back(pc);
        }
      }
    }
    r.number(j, p, "e_max", v.e_max);
    r.number(j, p, "e_min", v.e_min);
    r.number(j, p, "e_initial", v.e_initial);
    r.number(j, p, "e_final", v.e_final);
    r.number(j, p, "p_max", v.p_max);
    r.number(j, p, "efficiency", v.efficiency);
    r.integer(j, p, "window_start", v.window_start);
    r.integer(j, p, "window_end", v.window_end);
    r.number(j, p, "droop", v.droop);
    r.number(j, p, "capacity_offer", v.capacity_offer);
    r.number(j, p, "deployment_offer", v.deployment_offer);
    r.numbers(j, p, "capacity_offer_by_period", v.capacity_offer_by_period, false);
    r.numbers(j, p, "deployment_offer_by_period", v.deployment_offer_by_period, false);
  });
  r.list<Contingency>(doc, "contingencies", inst.contingencies,
                      [&](const json& j, const std::string& p, Contingency& k) {
    if (!r.object(j, p, {"id", "outaged_units", "outaged_lines"})) return;
    r.string(j, p, "id", k.id);
    r.strings(j, p, "outaged_units", k.outaged_units);
    r.strings(j, p, "outaged_lines", k.outaged_lines, false);
  });

  if (!r.problems.empty()) {
    throw InstanceError(ErrorCode::Schema,
                        "instance does not match the schema (" + std::to_string(r.problems.size()) + " problems)",
                        r.problems);
  }
  auto violations = validate(inst);
  if (!violations.empty()) {
    throw InstanceError(ErrorCode::Validation,
                        "instance is invalid (" + std::to_string(violations.size()) + " violations)",
                        std::move(violations));
  }
  return inst;
}

json encode(const Instance& inst) {
  json doc;
  const auto& s = inst.system;
  doc["system"] = {{"format_version", s.format_version}, {"n_periods", s.n_periods},
                   {"period_length", s.period_length}, {"currency", s.currency},
                   {"c_unserved", s.c_unserved},         {"c_spill", s.c_spill},
                   {"c_freq", s.c_freq},                 {"delta_f_max", s.delta_f_max},
                   {"d_pr", s.d_pr}};
  doc["buses"] = json::array();
  for (const auto& b : inst.buses) doc["buses"].push_back({{"id", b.id}, {"is_slack", b.is_slack}});
  doc["lines"] = json::array();
  for (const auto& l : inst.lines) {
    doc["lines"].push_back({{"id", l.id}, {"from_bus", l.from_bus}, {"to_bus", l.to_bus},
                            {"reactance", l.reactance}, {"capacity", l.capacity}});
  }
  doc["conventional_units"] = json::array();
  for (const auto& u : inst.conventional_units) {
    doc["conventional_units"].push_back(
        {{"id", u.id},           {"bus", u.bus},
         {"cost", u.cost},       {"p_max", u.p_max},
         {"p_min", u.p_min},     {"p0", u.p0},
         {"u0", u.u0},           {"su_cost", u.su_cost},
         {"sd_cost", u.sd_cost}, {"ramp_up", u.ramp_up},
         {"ramp_down", u.ramp_down}, {"min_up", u.min_up},
         {"min_down", u.min_down},   {"init_must_run", u.init_must_run},
         {"init_must_stop", u.init_must_stop}, {"droop", u.droop}});
  }
  doc["renewable_units"] = json::array();
  for (const auto& u : inst.renewable_units) {
    doc["renewable_units"].push_back({{"id", u.id}, {"bus", u.bus}, {"cost", u.cost}, {"p_max", u.p_max},
                                      {"availability", u.availability}});
  }
  doc["consumers"] = json::array();
  for (const auto& c : inst.consumers) {
    doc["consumers"].push_back({{"id", c.id}, {"bus", c.bus}, {"demand", c.demand}});
  }
  doc["pev_groups"] = json::array();
  for (const auto& v : inst.pev_groups) {
    json counts = json::object();
    for (const auto& c : v.counts) counts[c.bus] = c.count;
    json g = {{"id", v.id},
              {"counts", counts},
              {"e_max", v.e_max},
              {"e_min", v.e_min},
              {"e_initial", v.e_initial},
              {"e_final", v.e_final},
              {"p_max", v.p_max},
              {"efficiency", v.efficiency},
              {"window_start", v.window_start},
              {"window_end", v.window_end},
              {"droop", v.droop},
              {"capacity_offer", v.capacity_offer},
              {"deployment_offer", v.deployment_offer}};
    if (!v.capacity_offer_by_period.empty()) g["capacity_offer_by_period"] = v.capacity_offer_by_period;
    if (!v.deployment_offer_by_period.empty()) g["deployment_offer_by_period"] = v.deployment_offer_by_period;
    doc["pev_groups"].push_back(g);
  }
  doc["contingencies"] = json::array();
  for (const auto& k : inst.contingencies) {
    json c = {{"id", k.id}, {"outaged_units", k.outaged_units}};
    if (!k.outaged_lines.empty()) c["outaged_lines"] = k.outaged_lines;
    doc["contingencies"].push_back(c);
  }
  return doc;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  return decode(doc);
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InstanceError(ErrorCode::Io, "cannot read '" + path.string() + "'");
  return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& instance) {
  for (const auto& v : validate(instance)) {
    if (v.code == "NON_FINITE") {
      throw InstanceError(ErrorCode::Validation, "cannot serialize non-finite value at " + v.pointer);
    }
  }
  return encode(instance).dump(2) + "\n";
}

void write_instance(const Instance& instance, const std::filesystem::path& path) {
  const std::string text = serialize_instance(instance);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
}

}  // namespace gridsched::io
