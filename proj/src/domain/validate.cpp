#include <cmath>
#include <set>
#include <unordered_set>

#include "gridsched/domain.hpp"

namespace gridsched {

namespace {

class Checker {
 public:
  explicit Checker(const Instance& inst) : inst_(inst) {}

  std::vector<Violation> run();

 private:
  void add(std::string code, std::string message, std::string pointer) {
    out_.push_back({std::move(code), std::move(message), std::move(pointer)});
  }
  void finite(double v, const std::string& ptr) {
    if (!std::isfinite(v)) add("NON_FINITE", "value is not a finite number", ptr);
  }
  void nonneg(double v, const char* code, const std::string& ptr) {
    finite(v, ptr);
    if (v < 0) add(code, "value must be >= 0, got " + std::to_string(v), ptr);
  }
  bool series(const std::vector<double>& v, const std::string& ptr) {
    const auto n = static_cast<std::size_t>(inst_.system.n_periods);
    if (v.size() != n) {
      add("BAD_LENGTH",
          "expected " + std::to_string(n) + " periods, got " + std::to_string(v.size()), ptr);
      return false;
    }
    for (std::size_t t = 0; t < v.size(); ++t) finite(v[t], ptr + "/" + std::to_string(t));
    return true;
  }
  void bus_ref(const std::string& id, const std::string& ptr) {
    if (!bus_ids_.count(id)) add("UNKNOWN_BUS", "unknown bus '" + id + "'", ptr);
  }
  void unique(std::set<std::string>& seen, const std::string& id, const std::string& ptr) {
    if (!seen.insert(id).second) add("DUP_ID", "duplicate id '" + id + "'", ptr);
  }

  void system();
  void buses();
  void lines();
  void conventional();
  void renewable();
  void consumers();
  void pevs();
  void contingencies();

  const Instance& inst_;
  std::unordered_set<std::string> bus_ids_;
  std::unordered_set<std::string> unit_ids_;
  std::vector<Violation> out_;
};

void Checker::system() {
  const auto& s = inst_.system;
  nonneg(s.c_unserved, "NEG_PENALTY", "/system/c_unserved");
  nonneg(s.c_spill, "NEG_PENALTY", "/system/c_spill");
  nonneg(s.c_freq, "NEG_PENALTY", "/system/c_freq");
  finite(s.delta_f_max, "/system/delta_f_max");
  if (!(s.delta_f_max > 0)) add("BAD_DELTA_F", "delta_f_max must be > 0", "/system/delta_f_max");
  finite(s.period_length, "/system/period_length");
  if (!(s.period_length > 0)) add("BAD_PERIODS", "period_length must be > 0", "/system/period_length");
  if (s.n_periods < 1) add("BAD_PERIODS", "n_periods must be >= 1", "/system/n_periods");
  finite(s.d_pr, "/system/d_pr");
  if (!(s.d_pr > 0) || s.d_pr > s.period_length) {
    add("BAD_DPR", "d_pr must satisfy 0 < d_pr <= period_length", "/system/d_pr");
  }
}

void Checker::buses() {
  std::set<std::string> seen;
  int slack = 0;
  for (std::size_t i = 0; i < inst_.buses.size(); ++i) {
    const auto& b = inst_.buses[i];
    const std::string ptr = "/buses/" + std::to_string(i);
    unique(seen, b.id, ptr + "/id");
    bus_ids_.insert(b.id);
    if (b.is_slack && ++slack > 1) add("DUP_SLACK", "more than one slack bus", ptr + "/is_slack");
  }
  if (slack == 0) add("NO_SLACK", "no slack bus", "/buses");
}

void Checker::lines() {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < inst_.lines.size(); ++i) {
    const auto& l = inst_.lines[i];
    const std::string ptr = "/lines/" + std::to_string(i);
    unique(seen, l.id, ptr + "/id");
    bus_ref(l.from_bus, ptr + "/from_bus");
    bus_ref(l.to_bus, ptr + "/to_bus");
    if (l.from_bus == l.to_bus) add("SELF_LOOP", "line starts and ends at the same bus", ptr + "/to_bus");
    finite(l.reactance, ptr + "/reactance");
    if (!(l.reactance > 0)) add("BAD_REACTANCE", "reactance must be > 0", ptr + "/reactance");
    if (series(l.capacity, ptr + "/capacity")) {
      for (std::size_t t = 0; t < l.capacity.size(); ++t) {
        if (l.capacity[t] < 0) {
          add("NEG_CAPACITY", "line capacity must be >= 0", ptr + "/capacity/" + std::to_string(t));
        }
      }
    }
  }
}

void Checker::conventional() {
  for (std::size_t i = 0; i < inst_.conventional_units.size(); ++i) {
    const auto& g = inst_.conventional_units[i];
    const std::string ptr = "/conventional_units/" + std::to_string(i);
    if (!unit_ids_.insert(g.id).second) add("DUP_ID", "duplicate unit id '" + g.id + "'", ptr + "/id");
    bus_ref(g.bus, ptr + "/bus");
    for (auto [v, name] : {std::pair{g.cost, "cost"}, {g.p_max, "p_max"}, {g.p_min, "p_min"},
                           {g.p0, "p0"}, {g.su_cost, "su_cost"}, {g.sd_cost, "sd_cost"},
                           {g.ramp_up, "ramp_up"}, {g.ramp_down, "ramp_down"}, {g.droop, "droop"}}) {
      finite(v, ptr + "/" + name);
    }
    if (!(g.p_min >= 0 && g.p_min <= g.p_max)) {
      add("BAD_UNIT_LIMITS", "need 0 <= p_min <= p_max", ptr + "/p_min");
    }
    if (g.su_cost < 0) add("NEG_PENALTY", "startup cost must be >= 0", ptr + "/su_cost");
    if (g.sd_cost < 0) add("NEG_PENALTY", "shutdown cost must be >= 0", ptr + "/sd_cost");
    if (g.ramp_up < 0) add("BAD_RAMP", "ramp_up must be >= 0", ptr + "/ramp_up");
    if (g.ramp_down < 0) add("BAD_RAMP", "ramp_down must be >= 0", ptr + "/ramp_down");
    if (g.min_up < 1) add("BAD_MIN_UPDOWN", "min_up must be >= 1", ptr + "/min_up");
    if (g.min_down < 1) add("BAD_MIN_UPDOWN", "min_down must be >= 1", ptr + "/min_down");
    if (g.init_must_run < 0) add("BAD_INIT_STATE", "init_must_run must be >= 0", ptr + "/init_must_run");
    if (g.init_must_stop < 0) add("BAD_INIT_STATE", "init_must_stop must be >= 0", ptr + "/init_must_stop");
    if (!g.u0 && g.init_must_run != 0) {
      add("BAD_INIT_STATE", "init_must_run must be 0 when the unit starts off", ptr + "/init_must_run");
    }
    if (g.u0 && g.init_must_stop != 0) {
      add("BAD_INIT_STATE", "init_must_stop must be 0 when the unit starts on", ptr + "/init_must_stop");
    }
    if (g.u0 && !(g.p0 >= g.p_min && g.p0 <= g.p_max)) {
      add("BAD_INIT_STATE", "p0 must lie in [p_min, p_max] for a committed unit", ptr + "/p0");
    }
    if (!g.u0 && g.p0 != 0) add("BAD_INIT_STATE", "p0 must be 0 for an uncommitted unit", ptr + "/p0");
    if (!(g.droop > 0)) add("BAD_DROOP", "droop must be > 0", ptr + "/droop");
  }
}

void Checker::renewable() {
  for (std::size_t i = 0; i < inst_.renewable_units.size(); ++i) {
    const auto& g = inst_.renewable_units[i];
    const std::string ptr = "/renewable_units/" + std::to_string(i);
    if (!unit_ids_.insert(g.id).second) add("DUP_ID", "duplicate unit id '" + g.id + "'", ptr + "/id");
    bus_ref(g.bus, ptr + "/bus");
    finite(g.cost, ptr + "/cost");
    nonneg(g.p_max, "NEG_PMAX", ptr + "/p_max");
    if (series(g.availability, ptr + "/availability")) {
      for (std::size_t t = 0; t < g.availability.size(); ++t) {
        const double a = g.availability[t];
        if (a < 0 || a > 1) {
          add("BAD_AVAILABILITY", "availability must lie in [0, 1], got " + std::to_string(a),
              ptr + "/availability/" + std::to_string(t));
        }
      }
    }
  }
}

void Checker::consumers() {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < inst_.consumers.size(); ++i) {
    const auto& d = inst_.consumers[i];
    const std::string ptr = "/consumers/" + std::to_string(i);
    unique(seen, d.id, ptr + "/id");
    bus_ref(d.bus, ptr + "/bus");
    if (series(d.demand, ptr + "/demand")) {
      for (std::size_t t = 0; t < d.demand.size(); ++t) {
        if (d.demand[t] < 0) add("NEG_DEMAND", "demand must be >= 0", ptr + "/demand/" + std::to_string(t));
      }
    }
  }
}

void Checker::pevs() {
  std::set<std::string> seen;
  const int n_periods = inst_.system.n_periods;
  for (std::size_t i = 0; i < inst_.pev_groups.size(); ++i) {
    const auto& v = inst_.pev_groups[i];
    const std::string ptr = "/pev_groups/" + std::to_string(i);
    unique(seen, v.id, ptr + "/id");
    std::set<std::string> buses_seen;
    for (std::size_t j = 0; j < v.counts.size(); ++j) {
      const std::string cptr = ptr + "/counts/" + std::to_string(j);
      bus_ref(v.counts[j].bus, cptr + "/bus");
      if (!buses_seen.insert(v.counts[j].bus).second) {
        add("DUP_ID", "bus listed twice in counts", cptr + "/bus");
      }
      if (v.counts[j].count < 0) add("NEG_COUNT", "vehicle count must be >= 0", cptr + "/count");
    }
    for (auto [x, name] : {std::pair{v.e_max, "e_max"}, {v.e_min, "e_min"}, {v.e_initial, "e_initial"},
                           {v.e_final, "e_final"}, {v.p_max, "p_max"}, {v.efficiency, "efficiency"},
                           {v.droop, "droop"}, {v.capacity_offer, "capacity_offer"},
                           {v.deployment_offer, "deployment_offer"}}) {
      finite(x, ptr + "/" + name);
    }
    if (!(v.e_min >= 0 && v.e_min <= v.e_initial && v.e_initial <= v.e_max)) {
      add("BAD_PEV_ENERGY", "need 0 <= e_min <= e_initial <= e_max", ptr + "/e_initial");
    }
    if (!(v.e_final >= v.e_min && v.e_final <= v.e_max)) {
      add("BAD_PEV_ENERGY", "need e_min <= e_final <= e_max", ptr + "/e_final");
    }
    nonneg(v.p_max, "NEG_PMAX", ptr + "/p_max");
    if (!(v.efficiency > 0 && v.efficiency <= 1)) {
      add("BAD_EFFICIENCY", "efficiency must lie in (0, 1]", ptr + "/efficiency");
    }
    if (!(v.window_start >= 1 && v.window_start <= v.window_end && v.window_end <= n_periods)) {
      add("BAD_WINDOW", "need 1 <= window_start <= window_end <= n_periods", ptr + "/window_start");
    }
    if (!(v.droop > 0)) add("BAD_DROOP", "droop must be > 0", ptr + "/droop");
    if (v.capacity_offer < 0) add("NEG_OFFER", "offer must be >= 0", ptr + "/capacity_offer");
    if (v.deployment_offer < 0) add("NEG_OFFER", "offer must be >= 0", ptr + "/deployment_offer");
    for (auto [vec, name] : {std::pair{&v.capacity_offer_by_period, "capacity_offer_by_period"},
                             {&v.deployment_offer_by_period, "deployment_offer_by_period"}}) {
      if (vec->empty()) continue;
      const std::string optr = ptr + "/" + name;
      if (series(*vec, optr)) {
        for (std::size_t t = 0; t < vec->size(); ++t) {
          if ((*vec)[t] < 0) add("NEG_OFFER", "offer must be >= 0", optr + "/" + std::to_string(t));
        }
      }
    }
  }
}

void Checker::contingencies() {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < inst_.contingencies.size(); ++i) {
    const auto& c = inst_.contingencies[i];
    const std::string ptr = "/contingencies/" + std::to_string(i);
    unique(seen, c.id, ptr + "/id");
    if (c.outaged_units.empty()) add("EMPTY_CONTINGENCY", "no outaged units", ptr + "/outaged_units");
    std::set<std::string> listed;
    for (std::size_t j = 0; j < c.outaged_units.size(); ++j) {
      const auto& id = c.outaged_units[j];
      const std::string uptr = ptr + "/outaged_units/" + std::to_string(j);
      if (!unit_ids_.count(id)) add("UNKNOWN_UNIT", "unknown unit '" + id + "'", uptr);
      if (!listed.insert(id).second) add("DUP_ID", "unit listed twice", uptr);
    }
    if (!c.outaged_lines.empty()) {
      add("LINE_OUTAGE", "line outages are not supported; contingencies remove units only",
          ptr + "/outaged_lines");
    }
  }
}

std::vector<Violation> Checker::run() {
  system();
  buses();
  lines();
  conventional();
  renewable();
  consumers();
  pevs();
  contingencies();
  return std::move(out_);
}

}  // namespace

std::vector<Violation> validate(const Instance& instance) { return Checker(instance).run(); }

}  // namespace gridsched
