#include "instances.hpp"

#include <algorithm>
#include <cmath>

#include "lp_oracles.hpp"

namespace gridsched::testing {

Instance empty_instance(int periods) {
  Instance inst;
  inst.system.n_periods = periods;
  inst.system.c_unserved = 10000.0;
  inst.system.c_spill = 0.0;
  inst.system.c_freq = 10.0;
  inst.system.d_pr = 0.25;
  inst.buses.push_back({"b1", true});
  return inst;
}

ConventionalUnit table1_unit(std::string id, std::string bus) {
  ConventionalUnit u;
  u.id = std::move(id);
  u.bus = std::move(bus);
  u.cost = 505.0;
  u.p_max = 0.60;
  u.p_min = 0.12;
  u.p0 = 0.30;
  u.u0 = true;
  u.su_cost = 909.00;
  u.sd_cost = 9.09;
  u.ramp_up = 0.15;
  u.ramp_down = 0.15;
  u.min_up = 1;
  u.min_down = 1;
  u.droop = 2.0;
  return u;
}

void add_consumer(Instance& inst, std::string id, std::string bus, double demand) {
  inst.consumers.push_back({std::move(id), std::move(bus),
                            std::vector<double>(inst.system.n_periods, demand)});
}

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

Instance random_small(std::uint64_t seed) {
  SplitMix64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  const int T = rng.integer(3, 6);
  Instance inst = empty_instance(T);
  inst.system.c_spill = round3(rng.uniform(0, 20));
  inst.system.c_freq = round3(rng.uniform(1, 200));
  inst.system.delta_f_max = rng.uniform() < 0.5 ? 1.0 : 0.5;

  const int B = rng.integer(1, 3);
  for (int n = 2; n <= B; ++n) {
    inst.buses.push_back({"b" + std::to_string(n), false});
    Line l;
    l.id = "l" + std::to_string(n - 1);
    l.from_bus = "b" + std::to_string(rng.integer(1, n - 1));
    l.to_bus = "b" + std::to_string(n);
    l.reactance = round3(rng.uniform(0.05, 0.5));
    l.capacity.assign(T, round3(rng.uniform(0.2, 1.2)));
    inst.lines.push_back(l);
  }
  auto any_bus = [&] { return "b" + std::to_string(rng.integer(1, B)); };

  const int Gc = rng.integer(1, 2);
  double capacity = 0.0;
  for (int g = 1; g <= Gc; ++g) {
    ConventionalUnit u;
    u.id = "g" + std::to_string(g);
    u.bus = any_bus();
    u.p_max = round3(rng.uniform(0.4, 1.0));
    u.p_min = round3(u.p_max * rng.uniform(0.1, 0.4));
    u.cost = round3(rng.uniform(20, 500));
    u.su_cost = round3(rng.uniform(0, 900));
    u.sd_cost = round3(rng.uniform(0, 50));
    u.ramp_up = round3(std::max(u.p_min, u.p_max * rng.uniform(0.3, 1.0)));
    u.ramp_down = u.ramp_up;
    u.min_up = rng.integer(1, 3);
    u.min_down = rng.integer(1, 3);
    u.u0 = rng.uniform() < 0.5;
    if (u.u0) {
      u.p0 = u.p_min;
      u.init_must_run = rng.integer(0, 2);
    } else {
      u.init_must_stop = rng.integer(0, 2);
    }
    u.droop = round3(rng.uniform(0.5, 3.0));
    capacity += u.p_max;
    inst.conventional_units.push_back(u);
  }
  if (rng.uniform() < 0.5) {
    RenewableUnit r;
    r.id = "r1";
    r.bus = any_bus();
    r.p_max = round3(rng.uniform(0.2, 0.6));
    for (int t = 0; t < T; ++t) r.availability.push_back(round3(rng.uniform()));
    inst.renewable_units.push_back(r);
  }
  const int D = rng.integer(1, 3);
  for (int d = 1; d <= D; ++d) {
    Consumer c;
    c.id = "d" + std::to_string(d);
    c.bus = any_bus();
    for (int t = 0; t < T; ++t) c.demand.push_back(round3(rng.uniform(0.1, 0.9) * capacity / D));
    inst.consumers.push_back(c);
  }
  // Local load at every unit bus absorbs minimum output even when the
  // network cannot export it; otherwise must-run units can over-generate.
  for (int n = 1; n <= B; ++n) {
    const std::string bus = "b" + std::to_string(n);
    double floor = 0.0;
    for (const auto& u : inst.conventional_units) {
      if (u.bus == bus) floor += u.p_min;
    }
    if (floor > 0.0) add_consumer(inst, "local" + std::to_string(n), bus, floor);
  }
  if (rng.uniform() < 0.6) {
    PevGroup v;
    v.id = "v1";
    v.counts.push_back({any_bus(), rng.integer(5, 40)});
    if (B > 1 && rng.uniform() < 0.5) {
      const std::string other = any_bus();
      if (other != v.counts[0].bus) v.counts.push_back({other, rng.integer(0, 40)});
    }
    v.e_max = 0.052;
    v.e_min = 0.0052;
    v.e_initial = round3(rng.uniform(0.01, 0.04));
    v.e_final = std::max(v.e_min, round3(rng.uniform(v.e_min, v.e_initial)));  // never forces charging
    v.p_max = 0.0066;
    v.efficiency = round3(rng.uniform(0.85, 1.0));
    v.window_start = rng.integer(1, T);
    v.window_end = rng.integer(v.window_start, T);
    v.droop = round3(rng.uniform(0.02, 0.2));
    v.capacity_offer = 50.0;
    v.deployment_offer = 300.0;
    inst.pev_groups.push_back(v);
  }
  const int K = rng.integer(0, 2);
  const int units = Gc + static_cast<int>(inst.renewable_units.size());
  for (int k = 1; k <= K; ++k) {
    const int g = rng.integer(0, units - 1);
    const std::string id = g < Gc ? inst.conventional_units[g].id : inst.renewable_units[0].id;
    inst.contingencies.push_back({"k" + std::to_string(k), {id}, {}});
  }
  return inst;
}

Instance two_unit_six_period(std::uint64_t seed) {
  SplitMix64 rng(seed);
  Instance inst = empty_instance(6);
  for (int g = 1; g <= 2; ++g) {
    ConventionalUnit u = table1_unit("g" + std::to_string(g), "b1");
    u.cost = round3(rng.uniform(100, 600));
    u.ramp_up = u.ramp_down = 0.3;
    u.min_up = rng.integer(1, 3);
    u.min_down = rng.integer(1, 3);
    u.u0 = g == 1;
    u.p0 = u.u0 ? 0.3 : 0.0;
    inst.conventional_units.push_back(u);
  }
  Consumer c{"d1", "b1", {}};
  for (int t = 0; t < 6; ++t) c.demand.push_back(round3(rng.uniform(0.2, 1.0)));
  inst.consumers.push_back(c);
  inst.contingencies.push_back({"k1", {"g1"}, {}});
  return inst;
}

}  // namespace gridsched::testing
