#include <algorithm>
#include <cctype>
#include <cmath>

#include "gridsched/error.hpp"
#include "gridsched/formulation.hpp"

namespace gridsched {

using milp::Entry;
using milp::kInf;
using milp::Sense;

namespace {

class Builder {
 public:
  Builder(const Instance& inst, const CaseConfig& config)
      : inst_(inst), ix_(inst), config_(config), T_(inst.system.n_periods),
        dt_(inst.system.period_length) {
    if (config.contingencies) {
      for (int k : *config.contingencies) {
        if (k < 0 || k >= static_cast<int>(inst.contingencies.size())) {
          throw Error(ErrorCode::Argument, "contingency index out of range");
        }
      }
      ks_ = *config.contingencies;
    } else {
      for (int k = 0; k < static_cast<int>(inst.contingencies.size()); ++k) ks_.push_back(k);
    }
    if (config.mode == CaseMode::NoReserve) ks_.clear();
  }

  Formulation run();

 private:
  // Column creation ---------------------------------------------------------
  int col(const VarKey& key, double lo, double up, double cost, bool binary = false);
  std::string col_name(const VarKey& key) const;
  int c(Var f, int a, int t, int k = -1) const { return out_.catalog.find({f, a, t, k}); }

  void row(std::vector<Entry> entries, Sense sense, double rhs, ConstraintTag tag);

  void columns_pre();
  void columns_contingency(int k);

  void energy_balance();
  void network();
  void unit_limits();
  void ramps();
  void commitment();
  void min_up(int g);
  void min_down(int g);
  void pev_storage_pre();
  void generator_pfr(int k);
  void pfr_balance(int k);
  void pev_storage_contingency(int k);
  void pev_pfr(int k);

  bool reserve() const { return config_.mode != CaseMode::NoReserve; }

  const Instance& inst_;
  InstanceIndex ix_;
  CaseConfig config_;
  int T_;
  double dt_;
  std::vector<int> ks_;
  Formulation out_;
};

std::string Builder::col_name(const VarKey& key) const {
  std::string name(symbol(key.family));
  for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  auto add = [&](char tag, int v) { name += '_'; name += tag; name += std::to_string(v); };
  switch (key.family) {
    case Var::P: case Var::S: case Var::U: case Var::CSU: case Var::CSD: case Var::PPR:
      add('g', key.a + 1);
      break;
    case Var::PL: add('l', key.a + 1); break;
    case Var::Theta: add('n', key.a + 1); break;
    case Var::PUD: case Var::PUDPR: add('d', key.a + 1); break;
    case Var::DF: break;
    default: {
      const auto& cp = ix_.charge_points()[key.a];
      add('v', cp.group + 1);
      add('n', cp.bus + 1);
    }
  }
  add('t', key.t + 1);
  if (key.k >= 0 || key.family == Var::EV) add('k', key.k + 1);
  return name;
}

int Builder::col(const VarKey& key, double lo, double up, double cost, bool binary) {
  const int j = out_.model.add_column(lo, up, cost, binary, col_name(key));
  out_.catalog.add(key, j);
  return j;
}

void Builder::row(std::vector<Entry> entries, Sense sense, double rhs, ConstraintTag tag) {
  out_.model.add_row(entries, sense, rhs, tag.name());
  out_.tags.push_back(std::move(tag));
}

void Builder::columns_pre() {
  const auto& sys = inst_.system;
  const int Gc = ix_.num_conventional();
  for (int g = 0; g < ix_.num_units(); ++g) {
    const bool conv = ix_.is_conventional(g);
    const double cost = conv ? inst_.conventional_units[g].cost : inst_.renewable_units[g - Gc].cost;
    for (int t = 0; t < T_; ++t) {
      col({Var::P, g, t}, 0.0, conv ? ix_.unit_pmax(g) : kInf, cost * dt_);
    }
  }
  for (int g = Gc; g < ix_.num_units(); ++g) {
    for (int t = 0; t < T_; ++t) col({Var::S, g, t}, 0.0, kInf, sys.c_spill * dt_);
  }
  for (int g = 0; g < Gc; ++g) {
    for (int t = 0; t < T_; ++t) col({Var::U, g, t}, 0.0, 1.0, 0.0, true);
  }
  for (int g = 0; g < Gc; ++g) {
    for (int t = 0; t < T_; ++t) col({Var::CSU, g, t}, 0.0, kInf, 1.0);
  }
  for (int g = 0; g < Gc; ++g) {
    for (int t = 0; t < T_; ++t) col({Var::CSD, g, t}, 0.0, kInf, 1.0);
  }
  for (std::size_t l = 0; l < inst_.lines.size(); ++l) {
    for (int t = 0; t < T_; ++t) {
      const double cap = inst_.lines[l].capacity[t];
      col({Var::PL, static_cast<int>(l), t}, -cap, cap, 0.0);
    }
  }
  for (std::size_t n = 0; n < inst_.buses.size(); ++n) {
    const bool slack = static_cast<int>(n) == ix_.slack_bus();
    for (int t = 0; t < T_; ++t) {
      col({Var::Theta, static_cast<int>(n), t}, slack ? 0.0 : -kInf, slack ? 0.0 : kInf, 0.0);
    }
  }
  for (std::size_t d = 0; d < inst_.consumers.size(); ++d) {
    for (int t = 0; t < T_; ++t) {
      col({Var::PUD, static_cast<int>(d), t}, 0.0, inst_.consumers[d].demand[t], sys.c_unserved * dt_);
    }
  }
  const auto& cps = ix_.charge_points();
  for (std::size_t cp = 0; cp < cps.size(); ++cp) {
    const auto& grp = inst_.pev_groups[cps[cp].group];
    const double cap = cps[cp].count * grp.p_max * dt_;
    for (int t = 0; t < T_; ++t) {
      if (!grp.plugged(t)) continue;
      col({Var::EC, static_cast<int>(cp), t}, 0.0, cap, 0.0);
      col({Var::ED, static_cast<int>(cp), t}, 0.0, cap, 0.0);
    }
  }
  if (reserve()) {
    const bool pinned = config_.mode == CaseMode::GeneratorsOnly;
    for (std::size_t cp = 0; cp < cps.size(); ++cp) {
      const auto& grp = inst_.pev_groups[cps[cp].group];
      for (int t = 0; t < T_; ++t) {
        if (!grp.plugged(t)) continue;
        col({Var::CVPR, static_cast<int>(cp), t}, 0.0, pinned ? 0.0 : kInf, grp.capacity_price(t));
      }
    }
  }
  for (std::size_t cp = 0; cp < cps.size(); ++cp) {
    const auto& grp = inst_.pev_groups[cps[cp].group];
    const double N = cps[cp].count;
    for (int t = 0; t < T_; ++t) {
      if (!grp.plugged(t)) continue;
      double lo = N * grp.e_min;
      if (t + 1 == grp.window_end) lo = std::max(lo, N * grp.e_final);
      col({Var::EV, static_cast<int>(cp), t, -1}, lo, N * grp.e_max, 0.0);
    }
  }
}

void Builder::columns_contingency(int k) {
  const auto& sys = inst_.system;
  const double nd = config_.per_consumer_freq_penalty ? static_cast<double>(inst_.consumers.size()) : 1.0;
  for (int t = 0; t < T_; ++t) col({Var::DF, -1, t, k}, -sys.delta_f_max, 0.0, -sys.c_freq * nd);
  for (int g = 0; g < ix_.num_units(); ++g) {
    const bool out = ix_.outaged(k, g);
    if (!out && !ix_.is_conventional(g)) continue;  // surviving renewables give no PFR
    for (int t = 0; t < T_; ++t) {
      if (out) col({Var::PPR, g, t, k}, -ix_.unit_pmax(g), 0.0, 0.0);
      else col({Var::PPR, g, t, k}, 0.0, kInf, 0.0);
    }
  }
  for (std::size_t d = 0; d < inst_.consumers.size(); ++d) {
    for (int t = 0; t < T_; ++t) col({Var::PUDPR, static_cast<int>(d), t, k}, 0.0, kInf, sys.c_unserved);
  }
  const auto& cps = ix_.charge_points();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const int cp = static_cast<int>(i);
    const auto& grp = inst_.pev_groups[cps[i].group];
    const double N = cps[i].count;
    for (int t = 0; t < T_; ++t) {
      if (!grp.plugged(t)) continue;
      double lo = N * grp.e_min;
      if (t + 1 == grp.window_end) lo = std::max(lo, N * grp.e_final);
      col({Var::EV, cp, t, k}, lo, N * grp.e_max, 0.0);
      col({Var::ECPR, cp, t, k}, 0.0, kInf, 0.0);
      col({Var::EDPR, cp, t, k}, 0.0, kInf, 0.0);
      col({Var::PPRC, cp, t, k}, 0.0, N * grp.p_max, 0.0);
      col({Var::PPRD, cp, t, k}, 0.0, N * grp.p_max, 0.0);
      const double dep = grp.deployment_price(t) * (config_.literal_deployment_cost ? 1.0 : sys.d_pr);
      col({Var::PVPR, cp, t, k}, 0.0, kInf, dep);
    }
  }
}

void Builder::energy_balance() {
  const int N = static_cast<int>(inst_.buses.size());
  std::vector<std::vector<int>> units_at(N), lines_in(N), lines_out(N), cons_at(N), cps_at(N);
  for (int g = 0; g < ix_.num_units(); ++g) units_at[ix_.unit_bus(g)].push_back(g);
  for (int l = 0; l < static_cast<int>(inst_.lines.size()); ++l) {
    lines_out[ix_.line_from(l)].push_back(l);
    lines_in[ix_.line_to(l)].push_back(l);
  }
  for (int d = 0; d < static_cast<int>(inst_.consumers.size()); ++d) cons_at[ix_.consumer_bus(d)].push_back(d);
  const auto& cps = ix_.charge_points();
  for (int i = 0; i < static_cast<int>(cps.size()); ++i) cps_at[cps[i].bus].push_back(i);

  for (int n = 0; n < N; ++n) {
    for (int t = 0; t < T_; ++t) {
      std::vector<Entry> e;
      double rhs = 0.0;
      for (int g : units_at[n]) e.push_back({c(Var::P, g, t), 1.0});
      for (int l : lines_in[n]) e.push_back({c(Var::PL, l, t), 1.0});
      for (int l : lines_out[n]) e.push_back({c(Var::PL, l, t), -1.0});
      for (int i : cps_at[n]) {
        if (!inst_.pev_groups[cps[i].group].plugged(t)) continue;
        e.push_back({c(Var::ED, i, t), 1.0 / dt_});
        e.push_back({c(Var::EC, i, t), -1.0 / dt_});
      }
      for (int d : cons_at[n]) {
        e.push_back({c(Var::PUD, d, t), 1.0});
        rhs += inst_.consumers[d].demand[t];
      }
      row(std::move(e), Sense::Equal, rhs, {"Eq2", "", {{'n', n + 1}, {'t', t + 1}}});
    }
  }
}

void Builder::network() {
  for (int l = 0; l < static_cast<int>(inst_.lines.size()); ++l) {
    const double b = 1.0 / inst_.lines[l].reactance;
    for (int t = 0; t < T_; ++t) {
      row({{c(Var::PL, l, t), 1.0}, {c(Var::Theta, ix_.line_from(l), t), -b},
           {c(Var::Theta, ix_.line_to(l), t), b}},
          Sense::Equal, 0.0, {"Eq4", "", {{'l', l + 1}, {'t', t + 1}}});
    }
  }
}

void Builder::unit_limits() {
  for (int g = 0; g < ix_.num_conventional(); ++g) {
    const auto& u = inst_.conventional_units[g];
    for (int t = 0; t < T_; ++t) {
      row({{c(Var::P, g, t), 1.0}, {c(Var::U, g, t), -u.p_min}}, Sense::GreaterEqual, 0.0,
          {"Eq5", "L", {{'g', g + 1}, {'t', t + 1}}});
      row({{c(Var::P, g, t), 1.0}, {c(Var::U, g, t), -u.p_max}}, Sense::LessEqual, 0.0,
          {"Eq5", "U", {{'g', g + 1}, {'t', t + 1}}});
    }
  }
  const int Gc = ix_.num_conventional();
  for (int g = Gc; g < ix_.num_units(); ++g) {
    const auto& r = inst_.renewable_units[g - Gc];
    for (int t = 0; t < T_; ++t) {
      row({{c(Var::P, g, t), 1.0}, {c(Var::S, g, t), 1.0}}, Sense::Equal, r.p_max * r.availability[t],
          {"Eq6", "", {{'g', g + 1}, {'t', t + 1}}});
    }
  }
}

void Builder::ramps() {
  for (int g = 0; g < ix_.num_conventional(); ++g) {
    const auto& u = inst_.conventional_units[g];
    for (int t = 0; t < T_; ++t) {
      std::vector<Entry> e{{c(Var::P, g, t), 1.0}};
      double prev = 0.0;
      if (t == 0) prev = u.p0;
      else e.push_back({c(Var::P, g, t - 1), -1.0});
      row(e, Sense::LessEqual, u.ramp_up + prev, {"Eq7", "", {{'g', g + 1}, {'t', t + 1}}});
      for (auto& x : e) x.value = -x.value;
      row(e, Sense::LessEqual, u.ramp_down - prev, {"Eq8", "", {{'g', g + 1}, {'t', t + 1}}});
    }
  }
}

void Builder::commitment() {
  for (int g = 0; g < ix_.num_conventional(); ++g) {
    const auto& u = inst_.conventional_units[g];
    const double u0 = u.u0 ? 1.0 : 0.0;
    for (int t = 0; t < T_; ++t) {
      // c^SU >= SU (u_t - u_{t-1}),  c^SD >= SD (u_{t-1} - u_t)
      std::vector<Entry> su{{c(Var::CSU, g, t), 1.0}, {c(Var::U, g, t), -u.su_cost}};
      std::vector<Entry> sd{{c(Var::CSD, g, t), 1.0}, {c(Var::U, g, t), u.sd_cost}};
      double su_rhs = 0.0, sd_rhs = 0.0;
      if (t == 0) {
        su_rhs = -u.su_cost * u0;
        sd_rhs = u.sd_cost * u0;
      } else {
        su.push_back({c(Var::U, g, t - 1), u.su_cost});
        sd.push_back({c(Var::U, g, t - 1), -u.sd_cost});
      }
      row(su, Sense::GreaterEqual, su_rhs, {"Eq9", "", {{'g', g + 1}, {'t', t + 1}}});
      row(sd, Sense::GreaterEqual, sd_rhs, {"Eq10", "", {{'g', g + 1}, {'t', t + 1}}});
    }
    min_up(g);
    min_down(g);
  }
}

void Builder::min_up(int g) {
  const auto& u = inst_.conventional_units[g];
  const double u0 = u.u0 ? 1.0 : 0.0;
  const int L = std::min(u.init_must_run, T_);
  const int UT = u.min_up;
  if (L >= 1) {
    std::vector<Entry> e;
    for (int t = 0; t < L; ++t) e.push_back({c(Var::U, g, t), 1.0});
    row(e, Sense::Equal, L, {"Eq12", "", {{'g', g + 1}}});
  }
  // Rolling window: sum_{tau=t}^{t+UT-1} u >= UT (u_t - u_{t-1}).
  if (UT > 1) {
    for (int t = L; t <= T_ - UT; ++t) {
      std::vector<Entry> e;
      for (int s = t; s < t + UT; ++s) e.push_back({c(Var::U, g, s), 1.0});
      e.push_back({c(Var::U, g, t), -static_cast<double>(UT)});
      double rhs = 0.0;
      if (t == 0) rhs = -UT * u0;
      else e.push_back({c(Var::U, g, t - 1), static_cast<double>(UT)});
      row(e, Sense::GreaterEqual, rhs, {"Eq13", "", {{'g', g + 1}, {'t', t + 1}}});
    }
  }
  // Horizon tail: sum_{tau=t}^{T} (u_tau - (u_t - u_{t-1})) >= 0.
  for (int t = std::max(L, T_ - UT + 1); t < T_; ++t) {
    const double len = T_ - t;
    std::vector<Entry> e;
    for (int s = t; s < T_; ++s) e.push_back({c(Var::U, g, s), 1.0});
    e.push_back({c(Var::U, g, t), -len});
    double rhs = 0.0;
    if (t == 0) rhs = -len * u0;
    else e.push_back({c(Var::U, g, t - 1), len});
    row(e, Sense::GreaterEqual, rhs, {"Eq14", "", {{'g', g + 1}, {'t', t + 1}}});
  }
}

void Builder::min_down(int g) {
  const auto& u = inst_.conventional_units[g];
  const double u0 = u.u0 ? 1.0 : 0.0;
  const int L = std::min(u.init_must_stop, T_);
  const int DT = u.min_down;
  if (L >= 1) {
    std::vector<Entry> e;
    for (int t = 0; t < L; ++t) e.push_back({c(Var::U, g, t), 1.0});
    row(e, Sense::Equal, 0.0, {"Eq15", "", {{'g', g + 1}}});
  }
  // sum_{tau=t}^{t+DT-1} (1 - u) >= DT (u_{t-1} - u_t), moved to
  // -sum u + DT u_t - DT u_{t-1} >= -DT.
  if (DT > 1) {
    for (int t = L; t <= T_ - DT; ++t) {
      std::vector<Entry> e;
      for (int s = t; s < t + DT; ++s) e.push_back({c(Var::U, g, s), -1.0});
      e.push_back({c(Var::U, g, t), static_cast<double>(DT)});
      double rhs = -DT;
      if (t == 0) rhs += DT * u0;
      else e.push_back({c(Var::U, g, t - 1), -static_cast<double>(DT)});
      row(e, Sense::GreaterEqual, rhs, {"Eq16", "", {{'g', g + 1}, {'t', t + 1}}});
    }
  }
  for (int t = std::max(L, T_ - DT + 1); t < T_; ++t) {
    const double len = T_ - t;
    std::vector<Entry> e;
    for (int s = t; s < T_; ++s) e.push_back({c(Var::U, g, s), -1.0});
    e.push_back({c(Var::U, g, t), len});
    double rhs = -len;
    if (t == 0) rhs += len * u0;
    else e.push_back({c(Var::U, g, t - 1), -len});
    row(e, Sense::GreaterEqual, rhs, {"Eq17", "", {{'g', g + 1}, {'t', t + 1}}});
  }
}

void Builder::pev_storage_pre() {
  const auto& cps = ix_.charge_points();
  for (int i = 0; i < static_cast<int>(cps.size()); ++i) {
    const auto& grp = inst_.pev_groups[cps[i].group];
    const double eta = grp.efficiency;
    for (int t = grp.window_start - 1; t < grp.window_end; ++t) {
      std::vector<Entry> e{{c(Var::EV, i, t, -1), 1.0}, {c(Var::EC, i, t), -eta},
                           {c(Var::ED, i, t), 1.0 / eta}};
      double rhs = 0.0;
      if (t == grp.window_start - 1) rhs = cps[i].count * grp.e_initial;
      else e.push_back({c(Var::EV, i, t - 1, -1), -1.0});
      row(e, Sense::Equal, rhs,
          {"Eq25", "", {{'v', cps[i].group + 1}, {'n', cps[i].bus + 1}, {'t', t + 1}, {'k', 0}}});
    }
  }
}

void Builder::generator_pfr(int k) {
  for (int g = 0; g < ix_.num_units(); ++g) {
    for (int t = 0; t < T_; ++t) {
      const ConstraintTag tag{"", "", {{'g', g + 1}, {'t', t + 1}, {'k', k + 1}}};
      if (ix_.outaged(k, g)) {
        auto tg = tag;
        tg.equation = "Eq21";
        row({{c(Var::PPR, g, t, k), 1.0}, {c(Var::P, g, t), 1.0}}, Sense::Equal, 0.0, tg);
        continue;
      }
      if (!ix_.is_conventional(g)) continue;
      const auto& u = inst_.conventional_units[g];
      auto t18 = tag;
      t18.equation = "Eq18";
      // p^PR <= -df / DR
      row({{c(Var::PPR, g, t, k), 1.0}, {c(Var::DF, -1, t, k), 1.0 / u.droop}}, Sense::LessEqual, 0.0, t18);
      auto t19 = tag;
      t19.equation = "Eq19";
      row({{c(Var::PPR, g, t, k), 1.0}, {c(Var::P, g, t), 1.0}, {c(Var::U, g, t), -u.p_max}},
          Sense::LessEqual, 0.0, t19);
    }
  }
}

void Builder::pfr_balance(int k) {
  const auto& cps = ix_.charge_points();
  for (int t = 0; t < T_; ++t) {
    std::vector<Entry> e;
    for (int d = 0; d < static_cast<int>(inst_.consumers.size()); ++d) e.push_back({c(Var::PUDPR, d, t, k), 1.0});
    for (int g = 0; g < ix_.num_units(); ++g) {
      const int j = c(Var::PPR, g, t, k);
      if (j >= 0) e.push_back({j, 1.0});
    }
    for (int i = 0; i < static_cast<int>(cps.size()); ++i) {
      const int j = c(Var::PVPR, i, t, k);
      if (j >= 0) e.push_back({j, 1.0});
    }
    row(std::move(e), Sense::Equal, 0.0, {"Eq22", "", {{'t', t + 1}, {'k', k + 1}}});
  }
  for (int d = 0; d < static_cast<int>(inst_.consumers.size()); ++d) {
    for (int t = 0; t < T_; ++t) {
      row({{c(Var::PUD, d, t), 1.0}, {c(Var::PUDPR, d, t, k), 1.0}}, Sense::LessEqual,
          inst_.consumers[d].demand[t], {"UDCAP", "", {{'d', d + 1}, {'t', t + 1}, {'k', k + 1}}});
    }
  }
}

void Builder::pev_storage_contingency(int k) {
  const auto& cps = ix_.charge_points();
  for (int i = 0; i < static_cast<int>(cps.size()); ++i) {
    const auto& grp = inst_.pev_groups[cps[i].group];
    const double eta = grp.efficiency;
    for (int t = grp.window_start - 1; t < grp.window_end; ++t) {
      std::vector<Entry> e{{c(Var::EV, i, t, k), 1.0},      {c(Var::EC, i, t), -eta},
                           {c(Var::ECPR, i, t, k), eta},    {c(Var::ED, i, t), 1.0 / eta},
                           {c(Var::EDPR, i, t, k), 1.0 / eta}};
      double rhs = 0.0;
      if (t == grp.window_start - 1) rhs = cps[i].count * grp.e_initial;
      else e.push_back({c(Var::EV, i, t - 1, k), -1.0});
      row(e, Sense::Equal, rhs,
          {"Eq25", "", {{'v', cps[i].group + 1}, {'n', cps[i].bus + 1}, {'t', t + 1}, {'k', k + 1}}});
    }
  }
}

void Builder::pev_pfr(int k) {
  const double dpr = inst_.system.d_pr;
  const auto& cps = ix_.charge_points();
  for (int i = 0; i < static_cast<int>(cps.size()); ++i) {
    const auto& grp = inst_.pev_groups[cps[i].group];
    const double cap = cps[i].count * grp.p_max * dt_;
    for (int t = grp.window_start - 1; t < grp.window_end; ++t) {
      auto tag = [&](const char* eq) {
        return ConstraintTag{eq, "", {{'v', cps[i].group + 1}, {'n', cps[i].bus + 1}, {'t', t + 1}, {'k', k + 1}}};
      };
      const int ecpr = c(Var::ECPR, i, t, k), edpr = c(Var::EDPR, i, t, k);
      const int prc = c(Var::PPRC, i, t, k), prd = c(Var::PPRD, i, t, k), pr = c(Var::PVPR, i, t, k);
      row({{ecpr, 1.0}, {prc, -dpr}}, Sense::Equal, 0.0, tag("Eq28"));
      row({{prc, dpr}, {c(Var::EC, i, t), -1.0}}, Sense::LessEqual, 0.0, tag("Eq29"));
      row({{edpr, 1.0}, {prd, -dpr}}, Sense::Equal, 0.0, tag("Eq30"));
      row({{c(Var::ED, i, t), 1.0}, {prd, dpr}}, Sense::LessEqual, cap, tag("Eq31"));
      row({{pr, 1.0}, {prc, -1.0}, {prd, -1.0}}, Sense::Equal, 0.0, tag("Eq34"));
      row({{pr, 1.0}, {c(Var::DF, -1, t, k), 1.0 / grp.droop}}, Sense::LessEqual, 0.0, tag("Eq35"));
      row({{pr, 1.0}, {c(Var::CVPR, i, t), -1.0}}, Sense::LessEqual, 0.0, tag("Eq37"));
    }
  }
}

Formulation Builder::run() {
  out_.config = config_;
  out_.contingencies = ks_;
  columns_pre();
  for (int k : ks_) columns_contingency(k);

  energy_balance();
  network();
  unit_limits();
  ramps();
  commitment();
  pev_storage_pre();
  for (int k : ks_) {
    generator_pfr(k);
    pfr_balance(k);
    pev_storage_contingency(k);
    pev_pfr(k);
  }
  return std::move(out_);
}

}  // namespace

Formulation build(const Instance& instance, const CaseConfig& config) {
  const auto violations = validate(instance);
  if (!violations.empty()) {
    throw Error(ErrorCode::Validation, "instance is invalid: " + violations.front().code + " at " +
                                           violations.front().pointer);
  }
  return Builder(instance, config).run();
}

}  // namespace gridsched
