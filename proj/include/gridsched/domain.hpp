#pragma once

// Scheduling instance: network, units, consumers, PEV fleets, contingencies.
// Quantities are MW, MWh, Hz, hours and an opaque currency.

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gridsched {

struct Bus {
  std::string id;
  bool is_slack = false;
};

struct Line {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double reactance = 1.0;        // per unit
  std::vector<double> capacity;  // MW per period
};

struct ConventionalUnit {
  std::string id;
  std::string bus;
  double cost = 0.0;  // currency/MWh
  double p_max = 0.0;
  double p_min = 0.0;
  double p0 = 0.0;
  bool u0 = false;
  double su_cost = 0.0;
  double sd_cost = 0.0;
  double ramp_up = 0.0;    // MW per period
  double ramp_down = 0.0;
  int min_up = 1;
  int min_down = 1;
  int init_must_run = 0;   // periods the unit must stay on from t=1
  int init_must_stop = 0;  // periods the unit must stay off from t=1
  double droop = 1.0;      // Hz/MW
};

struct RenewableUnit {
  std::string id;
  std::string bus;
  double cost = 0.0;
  double p_max = 0.0;
  std::vector<double> availability;  // fraction of p_max per period
};

struct Consumer {
  std::string id;
  std::string bus;
  std::vector<double> demand;  // MW per period
};

struct PevCount {
  std::string bus;
  int count = 0;
};

struct PevGroup {
  std::string id;
  std::vector<PevCount> counts;
  // Per vehicle.
  double e_max = 0.0;  // MWh
  double e_min = 0.0;
  double e_initial = 0.0;
  double e_final = 0.0;
  double p_max = 0.0;  // MW
  double efficiency = 1.0;
  int window_start = 1;  // first period plugged in, 1-based
  int window_end = 1;    // last period plugged in
  double droop = 1.0;    // Hz/MW
  double capacity_offer = 0.0;    // currency/MW
  double deployment_offer = 0.0;  // currency/MWh
  // Optional per-period overrides; empty when absent.
  std::vector<double> capacity_offer_by_period;
  std::vector<double> deployment_offer_by_period;

  double capacity_price(int t) const {
    return capacity_offer_by_period.empty() ? capacity_offer : capacity_offer_by_period[t];
  }
  double deployment_price(int t) const {
    return deployment_offer_by_period.empty() ? deployment_offer : deployment_offer_by_period[t];
  }
  bool plugged(int t) const { return t + 1 >= window_start && t + 1 <= window_end; }
};

struct Contingency {
  std::string id;
  std::vector<std::string> outaged_units;
  // Accepted by the reader so that validate can reject it with a clear code.
  std::vector<std::string> outaged_lines;
};

struct SystemParams {
  double c_unserved = 10000.0;  // currency/MWh
  double c_spill = 0.0;         // currency/MWh
  double c_freq = 0.0;          // currency/Hz
  double delta_f_max = 1.0;     // Hz
  double d_pr = 0.25;           // hours
  int n_periods = 24;
  double period_length = 1.0;   // hours
  std::string currency = "BRL";
  std::string format_version = "1.0";
};

struct Instance {
  SystemParams system;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<ConventionalUnit> conventional_units;
  std::vector<RenewableUnit> renewable_units;
  std::vector<Consumer> consumers;
  std::vector<PevGroup> pev_groups;
  std::vector<Contingency> contingencies;

  bool operator==(const Instance&) const;
};

struct Violation {
  std::string code;     // e.g. DUP_SLACK
  std::string message;
  std::string pointer;  // JSON pointer into the instance file
};

/// Every invariant violation; empty iff the instance is usable.
std::vector<Violation> validate(const Instance& instance);

/// Sum of consumer demand in period t (1-based). Throws Error(Argument).
double total_demand(const Instance& instance, int t);

/// One (group, bus) pair with at least one vehicle.
struct ChargePoint {
  int group = 0;
  int bus = 0;
  int count = 0;
};

/// Resolved cross-references of a valid instance. Units are numbered with
/// conventional units first, then renewables.
class InstanceIndex {
 public:
  /// Throws Error(Validation) if any reference does not resolve.
  explicit InstanceIndex(const Instance& instance);

  int num_units() const { return num_conventional_ + num_renewable_; }
  int num_conventional() const { return num_conventional_; }
  bool is_conventional(int g) const { return g < num_conventional_; }

  int bus(std::string_view id) const;
  int unit(std::string_view id) const;
  int slack_bus() const { return slack_; }

  int unit_bus(int g) const { return unit_bus_[g]; }
  const std::string& unit_id(int g) const { return unit_id_[g]; }
  double unit_pmax(int g) const { return unit_pmax_[g]; }
  int line_from(int l) const { return line_from_[l]; }
  int line_to(int l) const { return line_to_[l]; }
  int consumer_bus(int d) const { return consumer_bus_[d]; }

  const std::vector<ChargePoint>& charge_points() const { return charge_points_; }
  /// outaged(k, g) for contingency k.
  bool outaged(int k, int g) const { return outaged_[k][g]; }

 private:
  std::unordered_map<std::string, int> bus_;
  std::unordered_map<std::string, int> unit_;
  int slack_ = -1;
  int num_conventional_ = 0;
  int num_renewable_ = 0;
  std::vector<int> unit_bus_;
  std::vector<std::string> unit_id_;
  std::vector<double> unit_pmax_;
  std::vector<int> line_from_, line_to_, consumer_bus_;
  std::vector<ChargePoint> charge_points_;
  std::vector<std::vector<char>> outaged_;
};

}  // namespace gridsched
