#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gridsched/io.hpp"
#include "instances.hpp"

using namespace gridsched;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("gridsched_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

io::InstanceError parse_error(std::string_view text) {
  try {
    io::parse_instance(text);
  } catch (const io::InstanceError& e) {
    return e;
  }
  FAIL("expected an error");
  return io::InstanceError(ErrorCode::Io, "");
}

CaseConfig mode(CaseMode m) {
  CaseConfig c;
  c.mode = m;
  return c;
}

}  // namespace

TEST_CASE("instance JSON round-trips exactly") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto inst = testing::random_small(seed);
    if (seed % 3 == 0 && !inst.pev_groups.empty()) {
      inst.pev_groups[0].capacity_offer_by_period.assign(inst.system.n_periods, 40.0 + seed);
    }
    const std::string text = io::serialize_instance(inst);
    const Instance back = io::parse_instance(text);
    CHECK(back == inst);
    CHECK(io::serialize_instance(back) == text);
  }
}

TEST_CASE("instance file on disk") {
  TempDir dir("inst");
  const auto inst = testing::random_small(4);
  io::write_instance(inst, dir.path / "a.json");
  CHECK(io::read_instance(dir.path / "a.json") == inst);
  try {
    io::read_instance(dir.path / "missing.json");
    FAIL("expected an error");
  } catch (const io::InstanceError& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("reader errors are distinct") {
  auto inst = testing::empty_instance(2);
  inst.renewable_units.push_back({"r1", "b1", 0.0, 0.5, {0.5, 1.2}});
  // Availability 1.2 is well-formed JSON but breaks a domain invariant.
  std::string text;
  {
    auto ok = inst;
    ok.renewable_units[0].availability[1] = 0.75;
    text = io::serialize_instance(ok);
    const auto at = text.find("0.75");
    REQUIRE(at != std::string::npos);
    text.replace(at, 4, "1.2");
  }
  const auto invalid = parse_error(text);
  CHECK(invalid.code() == ErrorCode::Validation);
  REQUIRE(invalid.problems().size() == 1);
  CHECK(invalid.problems()[0].code == "BAD_AVAILABILITY");
  CHECK(invalid.problems()[0].pointer == "/renewable_units/0/availability/1");

  CHECK(parse_error("{\"system\": ").code() == ErrorCode::Parse);
  CHECK(parse_error("[1, 2]").code() == ErrorCode::Schema);

  std::string typed = io::serialize_instance(testing::empty_instance(2));
  typed.replace(typed.find("\"is_slack\": true"), 16, "\"is_slack\": \"yes\"");
  const auto schema = parse_error(typed);
  CHECK(schema.code() == ErrorCode::Schema);
  REQUIRE(schema.problems().size() == 1);
  CHECK(schema.problems()[0].pointer == "/buses/0/is_slack");

  std::string extra = io::serialize_instance(testing::empty_instance(2));
  extra.replace(extra.find("\"buses\""), 7, "\"busses\": [], \"buses\"");
  const auto unknown = parse_error(extra);
  CHECK(unknown.code() == ErrorCode::Schema);
  CHECK(unknown.problems()[0].pointer == "/busses");
  CHECK(unknown.problems()[0].code == "SCHEMA_UNKNOWN_KEY");
}

TEST_CASE("missing required unit fields are reported by pointer") {
  const std::string text = R"({
    "system": {"n_periods": 1},
    "buses": [{"id": "b1", "is_slack": true}],
    "lines": [],
    "conventional_units": [{"id": "g1", "bus": "b1", "cost": 1, "p_max": 1, "p_min": 0}],
    "renewable_units": [], "consumers": [], "pev_groups": [], "contingencies": []
  })";
  const auto e = parse_error(text);
  CHECK(e.code() == ErrorCode::Schema);
  bool found = false;
  for (const auto& p : e.problems()) found |= p.pointer == "/conventional_units/0/init_must_run";
  CHECK(found);
}

TEST_CASE("result bundle of a zero solution") {
  TempDir dir("zero");
  auto inst = testing::empty_instance(2);
  auto u = testing::table1_unit("g1", "b1");
  u.u0 = false;
  u.p0 = 0.0;
  inst.conventional_units.push_back(u);
  testing::add_consumer(inst, "d1", "b1", 0.0);
  io::ResultBundle b;
  b.schedule = Schedule::zeros(inst);
  b.response = ContingencyResponse::zeros(inst, {});
  io::write_results(inst, b, dir.path);
  CHECK(slurp(dir.path / "schedule.csv") ==
        "g,t,p,u,spill,startup_cost,shutdown_cost\ng1,1,0,0,0,0,0\ng1,2,0,0,0,0,0\n");
  CHECK(slurp(dir.path / "unserved.csv") == "d,t,k_or_pre,value\nd1,1,pre,0\nd1,2,pre,0\n");
  CHECK(slurp(dir.path / "freq.csv") == "k,t,delta_f\n");
  CHECK(slurp(dir.path / "pev.csv") == "v,n,t,e_charge,e_discharge,capacity_reserved\n");
  CHECK(slurp(dir.path / "pfr.csv") ==
        "k,t,g_or_group,n,response,charge_reduction,discharge,e_charge_pr,e_discharge_pr\n");
  const auto back = io::read_results(inst, dir.path);
  CHECK(back.report.total == 0.0);
  CHECK(check_feasibility(inst, back.config, back.schedule, back.response).empty());
}

TEST_CASE("result bundles re-read pass the feasibility oracle") {
  TempDir dir("bundle");
  for (std::uint64_t seed : {2, 6, 9, 14}) {
    const auto inst = testing::random_small(seed);
    for (auto m : {CaseMode::NoReserve, CaseMode::GeneratorsOnly, CaseMode::GeneratorsAndPevs}) {
      INFO("seed " << seed << " case " << to_string(m));
      const auto res = solve_case(inst, mode(m));
      REQUIRE(res.mip.status == milp::MipStatus::Optimal);
      const fs::path out = dir.path / (std::to_string(seed) + "_" + std::to_string(case_number(m)));
      io::write_results(inst, io::make_bundle(res, {}), out);
      const auto back = io::read_results(inst, out);
      CHECK(back.config.mode == m);
      CHECK(back.response.contingencies == res.response.contingencies);
      const CaseConfig check = m == CaseMode::NoReserve ? mode(CaseMode::GeneratorsOnly) : back.config;
      const auto r = check_feasibility(inst, check, back.schedule, back.response);
      CHECK_MESSAGE(r.empty(), (r.empty() ? "" : r[0].describe()));
      CHECK(back.report.total == doctest::Approx(back.report.component_sum()).epsilon(1e-12));
      CHECK(back.report.total == res.report.total);

      // Writing again gives the same bytes, apart from the wall clock in meta.json.
      const fs::path again = out.string() + "_again";
      io::write_results(inst, io::make_bundle(res, {}), again);
      for (const char* f : {"schedule.csv", "pev.csv", "soc.csv", "pfr.csv", "freq.csv", "unserved.csv",
                            "network.csv", "costs.json"}) {
        CHECK(slurp(out / f) == slurp(again / f));
      }
    }
  }
}

TEST_CASE("format_number") {
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(0.1 + 0.2) == "0.3");
  CHECK(io::format_number(123456789.4) == "123456789");
  CHECK(io::format_number(1e-12) == "1e-12");
}

TEST_CASE("MPS: one variable, one row") {
  milp::Model m;
  m.add_column(0.0, milp::kInf, 1.0, false, "x");
  const milp::Entry e{0, 1.0};
  m.add_row(std::span(&e, 1), milp::Sense::GreaterEqual, 3.0, "R1");
  std::ostringstream out;
  io::write_mps(m, out);
  CHECK(out.str() ==
        "NAME GRIDSCHED\nOBJSENSE\n    MIN\nROWS\n N  OBJ\n G  R1\nCOLUMNS\n    x  OBJ  1\n    x  R1  1\n"
        "RHS\n    RHS  R1  3\nRANGES\nBOUNDS\nENDATA\n");
  int data = 0, rhs = 0;
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);) {
    data += line[0] == ' ';
    rhs += line.rfind("    RHS", 0) == 0;
  }
  CHECK(data == 6);
  CHECK(rhs == 1);
}

TEST_CASE("MPS: formulation round trip") {
  const auto inst = testing::random_small(6);
  const auto f = build(inst, mode(CaseMode::GeneratorsAndPevs));
  std::ostringstream a, b;
  io::write_mps(f.model, a);
  io::write_mps(f.model, b);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  const auto back = io::read_mps(in);
  CHECK(back.num_rows() == f.model.num_rows());
  CHECK(back.num_columns() == f.model.num_columns());
  CHECK(back.num_nonzeros() == f.model.num_nonzeros());
  CHECK(back.num_binaries() == f.model.num_binaries());
  std::ostringstream c;
  io::write_mps(back, c);
  CHECK(c.str() == a.str());
  const auto s1 = milp::solve_mip(f.model);
  const auto s2 = milp::solve_mip(back);
  REQUIRE(s1.status == milp::MipStatus::Optimal);
  REQUIRE(s2.status == milp::MipStatus::Optimal);
  CHECK(s2.objective == doctest::Approx(s1.objective).epsilon(1e-9));
  CHECK(a.str().find("EQ2_n1_t1") != std::string::npos);
  CHECK(a.str().find(" BV BND  U_g1_t1") != std::string::npos);
}

TEST_CASE("MPS: duplicate names are rejected") {
  milp::Model m;
  m.add_column(0, 1, 0, false, "x");
  m.add_column(0, 1, 0, false, "x");
  std::ostringstream out;
  CHECK_THROWS_AS(io::write_mps(m, out), Error);
}

TEST_CASE("MPS reader rejects garbage") {
  std::istringstream in("ROWS\n N OBJ\nCOLUMNS\n    x  NOPE  1\nENDATA\n");
  CHECK_THROWS_AS(io::read_mps(in), Error);
  std::istringstream truncated("ROWS\n N OBJ\n");
  CHECK_THROWS_AS(io::read_mps(truncated), Error);
}
