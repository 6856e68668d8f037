#include <cmath>

#include "doctest.h"
#include "gridsched/error.hpp"
#include "gridsched/evaluate.hpp"
#include "instances.hpp"

using namespace gridsched;

namespace {

CaseConfig mode(CaseMode m) {
  CaseConfig c;
  c.mode = m;
  return c;
}

std::string first(const std::vector<Residual>& r) { return r.empty() ? std::string() : r[0].describe(); }

}  // namespace

TEST_CASE("check_feasibility: all-zero instance and solution") {
  auto inst = testing::empty_instance(3);
  inst.buses.push_back({"b2", false});
  inst.lines.push_back({"l1", "b1", "b2", 0.1, {1, 1, 1}});
  testing::add_consumer(inst, "d1", "b2", 0.0);
  for (auto m : {CaseMode::NoReserve, CaseMode::GeneratorsOnly, CaseMode::GeneratorsAndPevs}) {
    CHECK(check_feasibility(inst, mode(m), Schedule::zeros(inst), ContingencyResponse::zeros(inst, {})).empty());
  }
}

TEST_CASE("check_feasibility: SOC below the floor gives one Eq26 residual") {
  // Period 1 the fleet discharges 0.009 MWh to serve demand and drops to
  // 0.001 MWh, under N*E_min = 0.01. Period 2 a 0.02 MW renewable recharges it.
  auto inst = testing::empty_instance(2);
  inst.renewable_units.push_back({"r1", "b1", 0.0, 1.0, {0.0, 0.02}});
  inst.consumers.push_back({"d1", "b1", {0.009, 0.0}});
  PevGroup v;
  v.id = "G1";
  v.counts = {{"b1", 1}};
  v.e_max = 0.052;
  v.e_min = v.e_initial = v.e_final = 0.01;
  v.p_max = 0.02;
  v.efficiency = 1.0;
  v.window_start = 1;
  v.window_end = 2;
  v.droop = 0.05;
  inst.pev_groups.push_back(v);
  REQUIRE(validate(inst).empty());

  auto s = Schedule::zeros(inst);
  s.p(0, 1) = 0.02;
  s.e_discharge(0, 0) = 0.009;
  s.soc(0, 0) = 0.001;
  s.e_charge(0, 1) = 0.02;
  s.soc(0, 1) = 0.021;
  const auto r = check_feasibility(inst, mode(CaseMode::NoReserve), s, ContingencyResponse::zeros(inst, {}));
  REQUIRE(r.size() == 1);
  CHECK(r[0].equation == "Eq26");
  CHECK(r[0].indices == std::vector<std::pair<char, int>>{{'v', 1}, {'n', 1}, {'t', 1}, {'k', 0}});
  CHECK(r[0].residual == doctest::Approx(0.009));
}

TEST_CASE("check_feasibility: shape mismatch is an error") {
  auto inst = testing::empty_instance(3);
  auto s = Schedule::zeros(testing::empty_instance(2));
  try {
    check_feasibility(inst, {}, s, ContingencyResponse::zeros(inst, {}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("check_feasibility agrees with every solved random case") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = testing::random_small(seed);
    for (auto m : {CaseMode::NoReserve, CaseMode::GeneratorsOnly, CaseMode::GeneratorsAndPevs}) {
      INFO("seed " << seed << " case " << to_string(m));
      const auto res = solve_case(inst, mode(m));
      REQUIRE(res.mip.status == milp::MipStatus::Optimal);
      const auto r = check_feasibility(inst, mode(m), res.schedule, res.response);
      CHECK_MESSAGE(r.empty(), first(r));
      CHECK(res.report.total == doctest::Approx(res.report.component_sum()).epsilon(1e-9));
      if (m != CaseMode::NoReserve) {
        CHECK(res.report.total == doctest::Approx(res.mip.objective).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("check_feasibility catches perturbed solutions") {
  const auto inst = testing::two_unit_six_period(7);
  const auto res = solve_case(inst, mode(CaseMode::GeneratorsOnly));
  REQUIRE(res.mip.status == milp::MipStatus::Optimal);
  auto s = res.schedule;
  s.p(0, 2) += 0.01;
  const auto r = check_feasibility(inst, mode(CaseMode::GeneratorsOnly), s, res.response);
  REQUIRE_FALSE(r.empty());
  bool balance = false;
  for (const auto& x : r) balance |= x.equation == "Eq2";
  CHECK(balance);
}

TEST_CASE("ex-post: losing the only unit leaves its output unserved") {
  auto inst = testing::empty_instance(3);
  inst.conventional_units.push_back(testing::table1_unit("g1", "b1"));
  testing::add_consumer(inst, "d1", "b1", 0.3);
  inst.contingencies.push_back({"k1", {"g1"}, {}});
  const auto res = solve_case(inst, mode(CaseMode::NoReserve));
  REQUIRE(res.mip.status == milp::MipStatus::Optimal);
  for (int t = 0; t < 3; ++t) {
    CHECK(res.schedule.p(0, t) == doctest::Approx(0.3));
    CHECK(res.response.unserved[0](0, t) == doctest::Approx(res.schedule.p(0, t)));
    CHECK(res.response.unit_response[0](0, t) == doctest::Approx(-0.3));
  }
  CHECK(res.report.unserved_pr == doctest::Approx(3 * 0.3 * 10000));
  CHECK(check_feasibility(inst, mode(CaseMode::GeneratorsOnly), res.schedule, res.response).empty());
}

TEST_CASE("ex-post: losing an idle unit costs nothing") {
  auto inst = testing::empty_instance(4);
  inst.conventional_units.push_back(testing::table1_unit("g1", "b1"));
  auto off = testing::table1_unit("g2", "b1");
  off.u0 = false;
  off.p0 = 0.0;
  off.cost = 5000.0;
  inst.conventional_units.push_back(off);
  testing::add_consumer(inst, "d1", "b1", 0.3);
  inst.contingencies.push_back({"k1", {"g2"}, {}});
  const auto res = solve_case(inst, mode(CaseMode::NoReserve));
  REQUIRE(res.mip.status == milp::MipStatus::Optimal);
  for (int t = 0; t < 4; ++t) {
    REQUIRE(res.schedule.u(1, t) == 0.0);
    CHECK(res.response.delta_f(0, t) == doctest::Approx(0.0));
    CHECK(res.response.unit_response[0](0, t) == doctest::Approx(0.0));
    CHECK(res.response.unit_response[0](1, t) == doctest::Approx(0.0));
  }
  CHECK(res.report.frequency == doctest::Approx(0.0));
  CHECK(res.report.unserved_pr == doctest::Approx(0.0));
}

TEST_CASE("ex-post: thread count does not change the result") {
  auto inst = testing::random_small(5);
  inst.contingencies.clear();
  for (const auto& u : inst.conventional_units) inst.contingencies.push_back({"k" + u.id, {u.id}, {}});
  const auto res = solve_case(inst, mode(CaseMode::NoReserve));
  REQUIRE(res.mip.status == milp::MipStatus::Optimal);
  ExPostOptions one, many;
  many.threads = 3;
  const auto a = evaluate_ex_post(inst, res.schedule, mode(CaseMode::NoReserve), one);
  const auto b = evaluate_ex_post(inst, res.schedule, mode(CaseMode::NoReserve), many);
  CHECK(a.response.delta_f == b.response.delta_f);
  CHECK(a.response.unserved == b.response.unserved);
  CHECK(a.report.total == b.report.total);
}

TEST_CASE("cost_report: zero solution") {
  const auto inst = testing::random_small(9);
  const auto r = cost_report(inst, mode(CaseMode::GeneratorsAndPevs), Schedule::zeros(inst),
                             ContingencyResponse::zeros(inst, {}));
  CHECK(r.total == 0.0);
  CHECK(r.component_sum() == 0.0);
}

TEST_CASE("cost_report: one startup of the second unit costs 909") {
  // Demand climbs past what unit 1 can ramp to; starting unit 2 (909) beats
  // 0.12 MWh unserved at 10000.
  auto inst = testing::empty_instance(4);
  inst.conventional_units.push_back(testing::table1_unit("g1", "b1"));
  auto g2 = testing::table1_unit("g2", "b1");
  g2.u0 = false;
  g2.p0 = 0.0;
  inst.conventional_units.push_back(g2);
  inst.consumers.push_back({"d1", "b1", {0.3, 0.45, 0.6, 0.72}});
  const auto res = solve_case(inst, mode(CaseMode::GeneratorsOnly));
  REQUIRE(res.mip.status == milp::MipStatus::Optimal);
  CHECK(res.report.startup == doctest::Approx(909.0));
  CHECK(res.report.shutdown == doctest::Approx(0.0));
  CHECK(res.report.unserved == doctest::Approx(0.0));
  CHECK(res.report.production == doctest::Approx(505.0 * (0.3 + 0.45 + 0.6 + 0.72)));
  CHECK(res.report.total == doctest::Approx(res.mip.objective));
}

TEST_CASE("cost_report: NoReserve total adds the ex-post terms") {
  const auto inst = testing::two_unit_six_period(3);
  const auto res = solve_case(inst, mode(CaseMode::NoReserve));
  REQUIRE(res.mip.status == milp::MipStatus::Optimal);
  const double post = res.report.unserved_pr + res.report.frequency + res.report.pev_deployment;
  CHECK(res.report.total == doctest::Approx(res.mip.objective + post).epsilon(1e-9));
  CHECK(post > 0.0);
}

TEST_CASE("cost_report: PEV capacity is priced at the capacity offer") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_small(seed);
    if (inst.pev_groups.empty() || inst.contingencies.empty()) continue;
    const auto res = solve_case(inst, mode(CaseMode::GeneratorsAndPevs));
    REQUIRE(res.mip.status == milp::MipStatus::Optimal);
    double reserved = 0.0;
    for (double c : res.schedule.capacity_reserved.data) reserved += c;
    CHECK(res.report.pev_capacity == doctest::Approx(50.0 * reserved * inst.system.period_length));
  }
}

TEST_CASE("SOC telescopes from the initial energy") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_small(seed);
    if (inst.pev_groups.empty()) continue;
    const auto res = solve_case(inst, mode(CaseMode::GeneratorsAndPevs));
    REQUIRE(res.mip.status == milp::MipStatus::Optimal);
    const InstanceIndex ix(inst);
    const auto& cps = ix.charge_points();
    for (std::size_t c = 0; c < cps.size(); ++c) {
      const auto& g = inst.pev_groups[cps[c].group];
      double energy = cps[c].count * g.e_initial;
      for (int t = g.window_start - 1; t < g.window_end; ++t) {
        energy += g.efficiency * res.schedule.e_charge(c, t) - res.schedule.e_discharge(c, t) / g.efficiency;
      }
      CHECK(res.schedule.soc(static_cast<int>(c), g.window_end - 1) == doctest::Approx(energy));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("brute force: one unit over two periods is four patterns") {
  auto inst = testing::empty_instance(2);
  inst.conventional_units.push_back(testing::table1_unit("g1", "b1"));
  testing::add_consumer(inst, "d1", "b1", 0.3);
  const auto r = brute_force_commitment(inst, mode(CaseMode::NoReserve));
  CHECK(r.patterns == 4);
  CHECK(r.feasible);
  CHECK(r.objective == doctest::Approx(2 * 0.3 * 505));
}

TEST_CASE("brute force: pattern guard") {
  const auto inst = testing::two_unit_six_period(1);
  try {
    brute_force_commitment(inst, mode(CaseMode::GeneratorsOnly), 1000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PatternLimit);
  }
}

TEST_CASE("brute force: two units by six periods matches branch and bound") {
  for (std::uint64_t seed : {11, 12}) {
    const auto inst = testing::two_unit_six_period(seed);
    for (auto m : {CaseMode::NoReserve, CaseMode::GeneratorsOnly}) {
      INFO("seed " << seed << " case " << to_string(m));
      const auto bf = brute_force_commitment(inst, mode(m));
      CHECK(bf.patterns == 4096);
      const auto f = build(inst, mode(m));
      const auto mip = milp::solve_mip(f.model);
      REQUIRE(bf.feasible);
      REQUIRE(mip.status == milp::MipStatus::Optimal);
      CHECK(std::abs(bf.objective - mip.objective) <= 1e-6 * std::max(1.0, std::abs(bf.objective)));
    }
  }
}

TEST_CASE("brute force: shortfall pays the unserved price") {
  // One unit capped at 0.6 MW against 0.8 MW of demand.
  auto inst = testing::empty_instance(1);
  auto u = testing::table1_unit("g1", "b1");
  u.p0 = 0.6;
  u.ramp_up = u.ramp_down = 1.0;
  inst.conventional_units.push_back(u);
  testing::add_consumer(inst, "d1", "b1", 0.8);
  const auto r = brute_force_commitment(inst, mode(CaseMode::NoReserve));
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(505 * 0.6 + 10000 * 0.2));
}

TEST_CASE("ex-post: forced PEV charging can outgrow sheddable demand") {
  // The unit covers 0.1 MW of demand plus 0.05 MW of mandatory charging.
  // Losing it drops 0.15 MW but only 0.1 MW of consumer demand can be shed.
  auto inst = testing::empty_instance(1);
  inst.conventional_units.push_back(testing::table1_unit("g1", "b1"));
  inst.conventional_units[0].p_min = 0.0;
  testing::add_consumer(inst, "d1", "b1", 0.1);
  PevGroup v;
  v.id = "G1";
  v.counts = {{"b1", 10}};
  v.e_max = 0.052;
  v.e_min = 0.0052;
  v.e_initial = 0.02;
  v.e_final = 0.025;
  v.p_max = 0.0066;
  v.efficiency = 1.0;
  v.droop = 0.05;
  v.capacity_offer = 50;
  v.deployment_offer = 300;
  inst.pev_groups.push_back(v);
  inst.contingencies.push_back({"k1", {"g1"}, {}});
  const auto f = build(inst, mode(CaseMode::NoReserve));
  const auto mip = milp::solve_mip(f.model);
  REQUIRE(mip.status == milp::MipStatus::Optimal);
  const auto s = extract_schedule(inst, f, mip.x);
  CHECK(s.p(0, 0) == doctest::Approx(0.15));
  try {
    evaluate_ex_post(inst, s, mode(CaseMode::NoReserve));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Solver);
  }
  // Curtailing the charge cannot help either: the contingency path has the
  // same final-energy floor and the schedule charges exactly up to it.
  ExPostOptions pev;
  pev.pev_reserve = true;
  CHECK_THROWS_AS(evaluate_ex_post(inst, s, mode(CaseMode::NoReserve), pev), Error);
}
