// Independent recomputation of every scheduling equation from the instance
// data and the solution values. Nothing here reads model rows.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridsched/error.hpp"
#include "gridsched/evaluate.hpp"

namespace gridsched {

namespace {

using Idx = std::vector<std::pair<char, int>>;

class Checker {
 public:
  Checker(const Instance& inst, double tol) : inst_(inst), ix_(inst), tol_(tol) {}

  // lhs ? rhs with `scale` the largest coefficient magnitude of the equation.
  void eq(const char* name, Idx idx, double lhs, double rhs, double scale) {
    report(name, std::move(idx), std::abs(lhs - rhs) / scale);
  }
  void le(const char* name, Idx idx, double lhs, double rhs, double scale) {
    report(name, std::move(idx), (lhs - rhs) / scale);
  }
  void ge(const char* name, Idx idx, double lhs, double rhs, double scale) {
    report(name, std::move(idx), (rhs - lhs) / scale);
  }

  void pre_contingency(const Schedule& s);
  void commitment(const Matrix& u);
  void pev_pre(const Schedule& s);
  void contingency(const Schedule& s, const ContingencyResponse& r, std::size_t pos);
  void pinned_capacity(const Schedule& s);

  std::vector<Residual> take() { return std::move(out_); }

 private:
  void report(const char* name, Idx idx, double residual) {
    if (residual > tol_ || std::isnan(residual)) out_.push_back({name, std::move(idx), residual});
  }

  const Instance& inst_;
  InstanceIndex ix_;
  double tol_;
  std::vector<Residual> out_;
};

double scale_of(std::initializer_list<double> coefs) {
  double m = 0.0;
  for (double c : coefs) m = std::max(m, std::abs(c));
  return m > 0 ? m : 1.0;
}

void Checker::pre_contingency(const Schedule& s) {
  const int T = inst_.system.n_periods;
  const double dt = inst_.system.period_length;
  const int B = static_cast<int>(inst_.buses.size());
  const auto& cps = ix_.charge_points();

  // Bus balance.
  std::vector<double> injection(static_cast<std::size_t>(B) * T, 0.0);
  std::vector<double> demand(static_cast<std::size_t>(B) * T, 0.0);
  std::vector<double> scale(static_cast<std::size_t>(B), 1.0);
  auto at = [T](int n, int t) { return static_cast<std::size_t>(n) * T + t; };
  for (int g = 0; g < ix_.num_units(); ++g) {
    for (int t = 0; t < T; ++t) injection[at(ix_.unit_bus(g), t)] += s.p(g, t);
  }
  for (int l = 0; l < static_cast<int>(inst_.lines.size()); ++l) {
    for (int t = 0; t < T; ++t) {
      injection[at(ix_.line_to(l), t)] += s.flow(l, t);
      injection[at(ix_.line_from(l), t)] -= s.flow(l, t);
    }
  }
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const int n = cps[i].bus;
    scale[n] = std::max(scale[n], 1.0 / dt);
    for (int t = 0; t < T; ++t) {
      injection[at(n, t)] += (s.e_discharge(static_cast<int>(i), t) - s.e_charge(static_cast<int>(i), t)) / dt;
    }
  }
  for (int d = 0; d < static_cast<int>(inst_.consumers.size()); ++d) {
    const int n = ix_.consumer_bus(d);
    for (int t = 0; t < T; ++t) demand[at(n, t)] += inst_.consumers[d].demand[t] - s.unserved(d, t);
    for (int t = 0; t < T; ++t) {
      const double v = s.unserved(d, t);
      ge("PUD", {{'d', d + 1}, {'t', t + 1}}, v, 0.0, 1.0);
      le("PUD", {{'d', d + 1}, {'t', t + 1}}, v, inst_.consumers[d].demand[t], 1.0);
    }
  }
  for (int n = 0; n < B; ++n) {
    for (int t = 0; t < T; ++t) {
      eq("Eq2", {{'n', n + 1}, {'t', t + 1}}, injection[at(n, t)], demand[at(n, t)], scale[n]);
    }
  }

  // Network.
  for (int l = 0; l < static_cast<int>(inst_.lines.size()); ++l) {
    const auto& line = inst_.lines[l];
    for (int t = 0; t < T; ++t) {
      const Idx idx{{'l', l + 1}, {'t', t + 1}};
      le("Eq3", idx, std::abs(s.flow(l, t)), line.capacity[t], 1.0);
      const double dtheta = s.angle(ix_.line_from(l), t) - s.angle(ix_.line_to(l), t);
      eq("Eq4", idx, s.flow(l, t), dtheta / line.reactance, scale_of({1.0, 1.0 / line.reactance}));
    }
  }
  for (int t = 0; t < T; ++t) {
    eq("SLACK", {{'n', ix_.slack_bus() + 1}, {'t', t + 1}}, s.angle(ix_.slack_bus(), t), 0.0, 1.0);
  }

  // Unit limits, ramps, start/stop costs.
  const int Gc = ix_.num_conventional();
  for (int g = 0; g < Gc; ++g) {
    const auto& u = inst_.conventional_units[g];
    for (int t = 0; t < T; ++t) {
      const Idx idx{{'g', g + 1}, {'t', t + 1}};
      const double ut = s.u(g, t);
      report("INT", idx, std::abs(ut - std::round(ut)));
      ge("Eq5", idx, s.p(g, t), u.p_min * ut, scale_of({1.0, u.p_min}));
      le("Eq5", idx, s.p(g, t), u.p_max * ut, scale_of({1.0, u.p_max}));
      const double prev_p = t == 0 ? u.p0 : s.p(g, t - 1);
      le("Eq7", idx, s.p(g, t) - prev_p, u.ramp_up, 1.0);
      le("Eq8", idx, prev_p - s.p(g, t), u.ramp_down, 1.0);
      const double prev_u = t == 0 ? (u.u0 ? 1.0 : 0.0) : s.u(g, t - 1);
      ge("Eq9", idx, s.startup_cost(g, t), u.su_cost * (ut - prev_u), scale_of({1.0, u.su_cost}));
      ge("Eq10", idx, s.shutdown_cost(g, t), u.sd_cost * (prev_u - ut), scale_of({1.0, u.sd_cost}));
      ge("Eq11", idx, s.startup_cost(g, t), 0.0, 1.0);
      ge("Eq11", idx, s.shutdown_cost(g, t), 0.0, 1.0);
    }
  }
  for (int g = Gc; g < ix_.num_units(); ++g) {
    const auto& r = inst_.renewable_units[g - Gc];
    for (int t = 0; t < T; ++t) {
      const Idx idx{{'g', g + 1}, {'t', t + 1}};
      eq("Eq6", idx, s.p(g, t) + s.spill(g, t), r.p_max * r.availability[t], 1.0);
      ge("Eq6", idx, s.p(g, t), 0.0, 1.0);
      ge("Eq6", idx, s.spill(g, t), 0.0, 1.0);
    }
  }
  commitment(s.u);
  pev_pre(s);
}

void Checker::commitment(const Matrix& u) {
  const int T = inst_.system.n_periods;
  for (int g = 0; g < ix_.num_conventional(); ++g) {
    const auto& unit = inst_.conventional_units[g];
    const double u0 = unit.u0 ? 1.0 : 0.0;
    auto uu = [&](int t) { return t < 0 ? u0 : u(g, t); };  // 0-based, -1 is the initial state

    const int TG = std::min(unit.init_must_run, T);
    double on = 0.0;
    for (int t = 0; t < TG; ++t) on += 1.0 - uu(t);
    if (TG > 0) eq("Eq12", {{'g', g + 1}}, on, 0.0, 1.0);
    const int UT = unit.min_up;
    for (int t = TG; t < T; ++t) {
      const double start = uu(t) - uu(t - 1);
      if (t + UT <= T) {
        double window = 0.0;
        for (int s = t; s < t + UT; ++s) window += uu(s);
        ge("Eq13", {{'g', g + 1}, {'t', t + 1}}, window, UT * start, static_cast<double>(UT));
      } else {
        double tail = 0.0;
        for (int s = t; s < T; ++s) tail += uu(s) - start;
        ge("Eq14", {{'g', g + 1}, {'t', t + 1}}, tail, 0.0, static_cast<double>(T - t));
      }
    }

    const int TC = std::min(unit.init_must_stop, T);
    double off = 0.0;
    for (int t = 0; t < TC; ++t) off += uu(t);
    if (TC > 0) eq("Eq15", {{'g', g + 1}}, off, 0.0, 1.0);
    const int DT = unit.min_down;
    for (int t = TC; t < T; ++t) {
      const double stop = uu(t - 1) - uu(t);
      if (t + DT <= T) {
        double window = 0.0;
        for (int s = t; s < t + DT; ++s) window += 1.0 - uu(s);
        ge("Eq16", {{'g', g + 1}, {'t', t + 1}}, window, DT * stop, static_cast<double>(DT));
      } else {
        double tail = 0.0;
        for (int s = t; s < T; ++s) tail += 1.0 - uu(s) - stop;
        ge("Eq17", {{'g', g + 1}, {'t', t + 1}}, tail, 0.0, static_cast<double>(T - t));
      }
    }
  }
}

void Checker::pev_pre(const Schedule& s) {
  const int T = inst_.system.n_periods;
  const double dt = inst_.system.period_length;
  const auto& cps = ix_.charge_points();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const int c = static_cast<int>(i);
    const auto& grp = inst_.pev_groups[cps[i].group];
    const double N = cps[i].count;
    const double eta = grp.efficiency;
    double soc = N * grp.e_initial;  // state at window_start - 1
    for (int t = 0; t < T; ++t) {
      const Idx idx{{'v', cps[i].group + 1}, {'n', cps[i].bus + 1}, {'t', t + 1}, {'k', 0}};
      if (!grp.plugged(t)) {
        eq("Eq36", idx, std::abs(s.e_charge(c, t)) + std::abs(s.e_discharge(c, t)) +
                            std::abs(s.capacity_reserved(c, t)), 0.0, 1.0);
        continue;
      }
      const double next = soc + eta * s.e_charge(c, t) - s.e_discharge(c, t) / eta;
      eq("Eq25", idx, s.soc(c, t), next, scale_of({1.0, eta, 1.0 / eta}));
      soc = s.soc(c, t);
      ge("Eq26", idx, soc, N * grp.e_min, 1.0);
      le("Eq26", idx, soc, N * grp.e_max, 1.0);
      if (t + 1 == grp.window_end) ge("Eq24", idx, soc, N * grp.e_final, 1.0);
      for (double e : {s.e_charge(c, t), s.e_discharge(c, t)}) {
        ge("Eq27", idx, e, 0.0, 1.0);
        le("Eq27", idx, e, N * grp.p_max * dt, 1.0);
      }
      ge("Eq37", idx, s.capacity_reserved(c, t), 0.0, 1.0);
    }
  }
}

void Checker::contingency(const Schedule& s, const ContingencyResponse& r, std::size_t pos) {
  const auto& sys = inst_.system;
  const int T = sys.n_periods;
  const double dt = sys.period_length;
  const double dpr = sys.d_pr;
  const int k = r.contingencies[pos];
  const int kk = k + 1;
  const int p = static_cast<int>(pos);
  const auto& cps = ix_.charge_points();
  for (int t = 0; t < T; ++t) {
    const double df = r.delta_f(p, t);
    const Idx tk{{'t', t + 1}, {'k', kk}};
    ge("DF", tk, df, -sys.delta_f_max, 1.0);
    le("DF", tk, df, 0.0, 1.0);
    double balance = 0.0;
    double lost = 0.0;
    for (int g = 0; g < ix_.num_units(); ++g) {
      const Idx idx{{'g', g + 1}, {'t', t + 1}, {'k', kk}};
      const double pr = r.unit_response[pos](g, t);
      balance += pr;
      if (ix_.outaged(k, g)) {
        eq("Eq21", idx, pr, -s.p(g, t), 1.0);
        lost += s.p(g, t);
      } else if (ix_.is_conventional(g)) {
        const auto& u = inst_.conventional_units[g];
        ge("Eq18", idx, pr, 0.0, 1.0);
        le("Eq18", idx, pr, -df / u.droop, scale_of({1.0, 1.0 / u.droop}));
        le("Eq19", idx, pr + s.p(g, t), u.p_max * s.u(g, t), scale_of({1.0, u.p_max}));
      } else {
        eq("Eq20", idx, pr, 0.0, 1.0);
      }
    }
    for (int d = 0; d < static_cast<int>(inst_.consumers.size()); ++d) {
      const double ud = r.unserved[pos](d, t);
      balance += ud;
      const Idx idx{{'d', d + 1}, {'t', t + 1}, {'k', kk}};
      ge("UDCAP", idx, ud, 0.0, 1.0);
      le("UDCAP", idx, s.unserved(d, t) + ud, inst_.consumers[d].demand[t], 1.0);
    }
    for (std::size_t i = 0; i < cps.size(); ++i) balance += r.pev_response[pos](static_cast<int>(i), t);
    eq("Eq22", tk, balance, 0.0, 1.0);
    (void)lost;
  }

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const int c = static_cast<int>(i);
    const auto& grp = inst_.pev_groups[cps[i].group];
    const double N = cps[i].count;
    const double eta = grp.efficiency;
    const double cap = N * grp.p_max;
    double soc = N * grp.e_initial;
    for (int t = 0; t < T; ++t) {
      const Idx idx{{'v', cps[i].group + 1}, {'n', cps[i].bus + 1}, {'t', t + 1}, {'k', kk}};
      const double prc = r.pev_charge_reduction[pos](c, t);
      const double prd = r.pev_discharge[pos](c, t);
      const double pr = r.pev_response[pos](c, t);
      const double ecpr = r.e_charge_pr[pos](c, t);
      const double edpr = r.e_discharge_pr[pos](c, t);
      if (!grp.plugged(t)) {
        eq("Eq36", idx, std::abs(prc) + std::abs(prd) + std::abs(pr) + std::abs(ecpr) + std::abs(edpr), 0.0, 1.0);
        continue;
      }
      const double next = soc + eta * (s.e_charge(c, t) - ecpr) - (s.e_discharge(c, t) + edpr) / eta;
      eq("Eq25", idx, r.soc[pos](c, t), next, scale_of({1.0, eta, 1.0 / eta}));
      soc = r.soc[pos](c, t);
      ge("Eq26", idx, soc, N * grp.e_min, 1.0);
      le("Eq26", idx, soc, N * grp.e_max, 1.0);
      if (t + 1 == grp.window_end) ge("Eq24", idx, soc, N * grp.e_final, 1.0);
      eq("Eq28", idx, ecpr, dpr * prc, scale_of({1.0, dpr}));
      le("Eq29", idx, dpr * prc, s.e_charge(c, t), scale_of({1.0, dpr}));
      eq("Eq30", idx, edpr, dpr * prd, scale_of({1.0, dpr}));
      le("Eq31", idx, s.e_discharge(c, t) + dpr * prd, cap * dt, scale_of({1.0, dpr}));
      ge("Eq32", idx, prc, 0.0, 1.0);
      le("Eq32", idx, prc, cap, 1.0);
      ge("Eq33", idx, prd, 0.0, 1.0);
      le("Eq33", idx, prd, cap, 1.0);
      eq("Eq34", idx, pr, prc + prd, 1.0);
      ge("Eq35", idx, pr, 0.0, 1.0);
      le("Eq35", idx, pr, -r.delta_f(p, t) / grp.droop, scale_of({1.0, 1.0 / grp.droop}));
      le("Eq37", idx, pr, s.capacity_reserved(c, t), 1.0);
    }
  }
}

// Generators-only scheduling reserves no PEV capacity.
void Checker::pinned_capacity(const Schedule& s) {
  const auto& cps = ix_.charge_points();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    for (int t = 0; t < s.capacity_reserved.cols; ++t) {
      eq("Eq37", {{'v', cps[i].group + 1}, {'n', cps[i].bus + 1}, {'t', t + 1}},
         s.capacity_reserved(static_cast<int>(i), t), 0.0, 1.0);
    }
  }
}

void check_shapes(const Instance& inst, const Schedule& s, const ContingencyResponse& r) {
  const auto ref = Schedule::zeros(inst);
  auto same = [](const Matrix& a, const Matrix& b) { return a.rows == b.rows && a.cols == b.cols; };
  const bool ok = same(s.p, ref.p) && same(s.u, ref.u) && same(s.spill, ref.spill) &&
                  same(s.startup_cost, ref.startup_cost) && same(s.shutdown_cost, ref.shutdown_cost) &&
                  same(s.flow, ref.flow) && same(s.angle, ref.angle) && same(s.unserved, ref.unserved) &&
                  same(s.e_charge, ref.e_charge) && same(s.e_discharge, ref.e_discharge) &&
                  same(s.capacity_reserved, ref.capacity_reserved) && same(s.soc, ref.soc);
  if (!ok) throw Error(ErrorCode::DimensionMismatch, "schedule dimensions do not match the instance");
  for (int k : r.contingencies) {
    if (k < 0 || k >= static_cast<int>(inst.contingencies.size())) {
      throw Error(ErrorCode::DimensionMismatch, "response refers to an unknown contingency");
    }
  }
  const auto rref = ContingencyResponse::zeros(inst, r.contingencies);
  bool rok = same(r.delta_f, rref.delta_f);
  auto all = [&](const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!same(a[i], b[i])) return false;
    }
    return true;
  };
  rok = rok && all(r.unit_response, rref.unit_response) && all(r.unserved, rref.unserved) &&
        all(r.pev_response, rref.pev_response) && all(r.pev_charge_reduction, rref.pev_charge_reduction) &&
        all(r.pev_discharge, rref.pev_discharge) && all(r.e_charge_pr, rref.e_charge_pr) &&
        all(r.e_discharge_pr, rref.e_discharge_pr) && all(r.soc, rref.soc);
  if (!rok) throw Error(ErrorCode::DimensionMismatch, "response dimensions do not match the instance");
}

}  // namespace

std::string Residual::describe() const {
  std::ostringstream os;
  os << equation;
  for (const auto& [c, v] : indices) os << ' ' << c << '=' << v;
  os << " residual=" << residual;
  return os.str();
}

std::vector<Residual> check_feasibility(const Instance& instance, const CaseConfig& config,
                                        const Schedule& schedule, const ContingencyResponse& response,
                                        double tolerance) {
  check_shapes(instance, schedule, response);
  Checker checker(instance, tolerance);
  checker.pre_contingency(schedule);
  if (config.mode == CaseMode::GeneratorsOnly) checker.pinned_capacity(schedule);
  for (std::size_t i = 0; i < response.contingencies.size(); ++i) {
    checker.contingency(schedule, response, i);
  }
  return checker.take();
}

bool commitment_rules_hold(const Instance& instance, const Matrix& u) {
  Checker checker(instance, 1e-9);
  checker.commitment(u);
  return checker.take().empty();
}

}  // namespace gridsched
