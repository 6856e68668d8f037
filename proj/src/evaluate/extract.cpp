#include "gridsched/evaluate.hpp"

namespace gridsched {

Schedule Schedule::zeros(const Instance& inst) {
  const InstanceIndex ix(inst);
  const int T = inst.system.n_periods;
  const int G = ix.num_units();
  const int C = static_cast<int>(ix.charge_points().size());
  Schedule s;
  s.p = s.u = s.spill = s.startup_cost = s.shutdown_cost = Matrix(G, T);
  s.flow = Matrix(static_cast<int>(inst.lines.size()), T);
  s.angle = Matrix(static_cast<int>(inst.buses.size()), T);
  s.unserved = Matrix(static_cast<int>(inst.consumers.size()), T);
  s.e_charge = s.e_discharge = s.capacity_reserved = s.soc = Matrix(C, T);
  return s;
}

ContingencyResponse ContingencyResponse::zeros(const Instance& inst, std::vector<int> ks) {
  const InstanceIndex ix(inst);
  const int T = inst.system.n_periods;
  const int K = static_cast<int>(ks.size());
  const int C = static_cast<int>(ix.charge_points().size());
  ContingencyResponse r;
  r.contingencies = std::move(ks);
  r.delta_f = Matrix(K, T);
  r.unit_response.assign(K, Matrix(ix.num_units(), T));
  r.unserved.assign(K, Matrix(static_cast<int>(inst.consumers.size()), T));
  r.pev_response = r.pev_charge_reduction = r.pev_discharge = r.e_charge_pr = r.e_discharge_pr =
      r.soc = std::vector<Matrix>(K, Matrix(C, T));
  return r;
}

Schedule extract_schedule(const Instance& inst, const Formulation& f, const std::vector<double>& x) {
  auto s = Schedule::zeros(inst);
  const auto& cat = f.catalog;
  auto fill = [&](Matrix& m, Var family, int k = -1) {
    for (int a = 0; a < m.rows; ++a) {
      for (int t = 0; t < m.cols; ++t) m(a, t) = cat.value(x, {family, a, t, k});
    }
  };
  fill(s.p, Var::P);
  fill(s.u, Var::U);
  fill(s.spill, Var::S);
  fill(s.startup_cost, Var::CSU);
  fill(s.shutdown_cost, Var::CSD);
  fill(s.flow, Var::PL);
  fill(s.angle, Var::Theta);
  fill(s.unserved, Var::PUD);
  fill(s.e_charge, Var::EC);
  fill(s.e_discharge, Var::ED);
  fill(s.capacity_reserved, Var::CVPR);
  fill(s.soc, Var::EV, -1);
  return s;
}

ContingencyResponse extract_response(const Instance& inst, const Formulation& f,
                                     const std::vector<double>& x) {
  auto r = ContingencyResponse::zeros(inst, f.contingencies);
  const auto& cat = f.catalog;
  for (std::size_t i = 0; i < r.contingencies.size(); ++i) {
    const int k = r.contingencies[i];
    const int pos = static_cast<int>(i);
    for (int t = 0; t < r.delta_f.cols; ++t) r.delta_f(pos, t) = cat.value(x, {Var::DF, -1, t, k});
    auto fill = [&](Matrix& m, Var family) {
      for (int a = 0; a < m.rows; ++a) {
        for (int t = 0; t < m.cols; ++t) m(a, t) = cat.value(x, {family, a, t, k});
      }
    };
    fill(r.unit_response[i], Var::PPR);
    fill(r.unserved[i], Var::PUDPR);
    fill(r.pev_response[i], Var::PVPR);
    fill(r.pev_charge_reduction[i], Var::PPRC);
    fill(r.pev_discharge[i], Var::PPRD);
    fill(r.e_charge_pr[i], Var::ECPR);
    fill(r.e_discharge_pr[i], Var::EDPR);
    fill(r.soc[i], Var::EV);
  }
  return r;
}

CostReport cost_report(const Instance& inst, const CaseConfig& config, const Schedule& s,
                       const ContingencyResponse& r) {
  const InstanceIndex ix(inst);
  const auto& sys = inst.system;
  const int T = sys.n_periods;
  const double dt = sys.period_length;
  const int Gc = ix.num_conventional();
  CostReport c;
  for (int g = 0; g < ix.num_units(); ++g) {
    const double price = g < Gc ? inst.conventional_units[g].cost : inst.renewable_units[g - Gc].cost;
    for (int t = 0; t < T; ++t) {
      c.production += dt * price * s.p(g, t);
      c.startup += s.startup_cost(g, t);
      c.shutdown += s.shutdown_cost(g, t);
      c.spill += dt * sys.c_spill * s.spill(g, t);
    }
  }
  for (int d = 0; d < s.unserved.rows; ++d) {
    for (int t = 0; t < T; ++t) c.unserved += dt * sys.c_unserved * s.unserved(d, t);
  }
  const auto& cps = ix.charge_points();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const auto& grp = inst.pev_groups[cps[i].group];
    for (int t = 0; t < T; ++t) c.pev_capacity += grp.capacity_price(t) * s.capacity_reserved(static_cast<int>(i), t);
  }
  const double nd = config.per_consumer_freq_penalty ? static_cast<double>(inst.consumers.size()) : 1.0;
  const double dep_factor = config.literal_deployment_cost ? 1.0 : sys.d_pr;
  for (std::size_t k = 0; k < r.contingencies.size(); ++k) {
    for (int t = 0; t < T; ++t) {
      c.frequency -= sys.c_freq * nd * r.delta_f(static_cast<int>(k), t);
      for (int d = 0; d < r.unserved[k].rows; ++d) c.unserved_pr += sys.c_unserved * r.unserved[k](d, t);
      for (std::size_t i = 0; i < cps.size(); ++i) {
        const auto& grp = inst.pev_groups[cps[i].group];
        c.pev_deployment += grp.deployment_price(t) * dep_factor * r.pev_response[k](static_cast<int>(i), t);
      }
    }
  }
  c.total = c.component_sum();
  return c;
}

}  // namespace gridsched
