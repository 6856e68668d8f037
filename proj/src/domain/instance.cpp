#include <string>

#include "gridsched/domain.hpp"
#include "gridsched/error.hpp"

namespace gridsched {

namespace {

bool same(const Bus& a, const Bus& b) { return a.id == b.id && a.is_slack == b.is_slack; }

bool same(const Line& a, const Line& b) {
  return a.id == b.id && a.from_bus == b.from_bus && a.to_bus == b.to_bus &&
         a.reactance == b.reactance && a.capacity == b.capacity;
}

bool same(const ConventionalUnit& a, const ConventionalUnit& b) {
  return a.id == b.id && a.bus == b.bus && a.cost == b.cost && a.p_max == b.p_max &&
         a.p_min == b.p_min && a.p0 == b.p0 && a.u0 == b.u0 && a.su_cost == b.su_cost &&
         a.sd_cost == b.sd_cost && a.ramp_up == b.ramp_up && a.ramp_down == b.ramp_down &&
         a.min_up == b.min_up && a.min_down == b.min_down &&
         a.init_must_run == b.init_must_run && a.init_must_stop == b.init_must_stop &&
         a.droop == b.droop;
}

bool same(const RenewableUnit& a, const RenewableUnit& b) {
  return a.id == b.id && a.bus == b.bus && a.cost == b.cost && a.p_max == b.p_max &&
         a.availability == b.availability;
}

bool same(const Consumer& a, const Consumer& b) {
  return a.id == b.id && a.bus == b.bus && a.demand == b.demand;
}

bool same(const PevGroup& a, const PevGroup& b) {
  if (a.counts.size() != b.counts.size()) return false;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    if (a.counts[i].bus != b.counts[i].bus || a.counts[i].count != b.counts[i].count) return false;
  }
  return a.id == b.id && a.e_max == b.e_max && a.e_min == b.e_min &&
         a.e_initial == b.e_initial && a.e_final == b.e_final && a.p_max == b.p_max &&
         a.efficiency == b.efficiency && a.window_start == b.window_start &&
         a.window_end == b.window_end && a.droop == b.droop &&
         a.capacity_offer == b.capacity_offer && a.deployment_offer == b.deployment_offer &&
         a.capacity_offer_by_period == b.capacity_offer_by_period &&
         a.deployment_offer_by_period == b.deployment_offer_by_period;
}

bool same(const Contingency& a, const Contingency& b) {
  return a.id == b.id && a.outaged_units == b.outaged_units && a.outaged_lines == b.outaged_lines;
}

bool same(const SystemParams& a, const SystemParams& b) {
  return a.c_unserved == b.c_unserved && a.c_spill == b.c_spill && a.c_freq == b.c_freq &&
         a.delta_f_max == b.delta_f_max && a.d_pr == b.d_pr && a.n_periods == b.n_periods &&
         a.period_length == b.period_length && a.currency == b.currency &&
         a.format_version == b.format_version;
}

template <class T>
bool same_all(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool Instance::operator==(const Instance& o) const {
  return same(system, o.system) && same_all(buses, o.buses) && same_all(lines, o.lines) &&
         same_all(conventional_units, o.conventional_units) &&
         same_all(renewable_units, o.renewable_units) && same_all(consumers, o.consumers) &&
         same_all(pev_groups, o.pev_groups) && same_all(contingencies, o.contingencies);
}

double total_demand(const Instance& instance, int t) {
  if (t < 1 || t > instance.system.n_periods) {
    throw Error(ErrorCode::Argument, "period " + std::to_string(t) + " out of range 1.." +
                                         std::to_string(instance.system.n_periods));
  }
  double sum = 0.0;
  for (const auto& d : instance.consumers) sum += d.demand.at(t - 1);
  return sum;
}

InstanceIndex::InstanceIndex(const Instance& inst) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::Validation, "unresolved reference: " + what);
  };
  for (std::size_t i = 0; i < inst.buses.size(); ++i) {
    bus_.emplace(inst.buses[i].id, static_cast<int>(i));
    if (inst.buses[i].is_slack && slack_ < 0) slack_ = static_cast<int>(i);
  }
  auto find_bus = [&](const std::string& id) {
    auto it = bus_.find(id);
    if (it == bus_.end()) fail("bus '" + id + "'");
    return it->second;
  };
  num_conventional_ = static_cast<int>(inst.conventional_units.size());
  num_renewable_ = static_cast<int>(inst.renewable_units.size());
  for (const auto& g : inst.conventional_units) {
    unit_.emplace(g.id, static_cast<int>(unit_id_.size()));
    unit_id_.push_back(g.id);
    unit_bus_.push_back(find_bus(g.bus));
    unit_pmax_.push_back(g.p_max);
  }
  for (const auto& g : inst.renewable_units) {
    unit_.emplace(g.id, static_cast<int>(unit_id_.size()));
    unit_id_.push_back(g.id);
    unit_bus_.push_back(find_bus(g.bus));
    unit_pmax_.push_back(g.p_max);
  }
  for (const auto& l : inst.lines) {
    line_from_.push_back(find_bus(l.from_bus));
    line_to_.push_back(find_bus(l.to_bus));
  }
  for (const auto& d : inst.consumers) consumer_bus_.push_back(find_bus(d.bus));
  for (std::size_t v = 0; v < inst.pev_groups.size(); ++v) {
    for (const auto& c : inst.pev_groups[v].counts) {
      if (c.count > 0) charge_points_.push_back({static_cast<int>(v), find_bus(c.bus), c.count});
    }
  }
  for (const auto& k : inst.contingencies) {
    std::vector<char> row(unit_id_.size(), 0);
    for (const auto& id : k.outaged_units) row[unit(id)] = 1;
    outaged_.push_back(std::move(row));
  }
}

int InstanceIndex::bus(std::string_view id) const {
  auto it = bus_.find(std::string(id));
  if (it == bus_.end()) throw Error(ErrorCode::Validation, "unknown bus '" + std::string(id) + "'");
  return it->second;
}

int InstanceIndex::unit(std::string_view id) const {
  auto it = unit_.find(std::string(id));
  if (it == unit_.end()) throw Error(ErrorCode::Validation, "unknown unit '" + std::string(id) + "'");
  return it->second;
}

}  // namespace gridsched
