#include <fstream>
#include <map>

#include "doctest.h"
#include "gridsched/formulation.hpp"
#include "gridsched/io.hpp"
#include "json.hpp"

using namespace gridsched;

namespace {

const std::string kBundled = std::string(GRIDSCHED_DATA_DIR) + "/unifap_synthetic.json";

CaseConfig mode(CaseMode m) {
  CaseConfig c;
  c.mode = m;
  return c;
}

}  // namespace

TEST_CASE("bundled instance has the campus shape") {
  const auto inst = io::read_instance(kBundled);
  CHECK(validate(inst).empty());
  CHECK(inst.buses.size() == 64);
  CHECK(inst.lines.size() == 63);
  CHECK(inst.conventional_units.size() == 3);
  CHECK(inst.renewable_units.size() == 2);
  CHECK(inst.consumers.size() == 32);
  CHECK(inst.pev_groups.size() == 3);
  CHECK(InstanceIndex(inst).charge_points().size() == 18);
  CHECK(inst.contingencies.size() == 5);
  CHECK(inst.system.n_periods == 24);
  CHECK(inst.renewable_units[0].p_max == 0.554);
  CHECK(inst.renewable_units[1].p_max == 0.720);
  for (const auto& u : inst.conventional_units) {
    CHECK(u.cost == 505.0);
    CHECK(u.p_min == 0.12);
    CHECK(u.p_max == 0.60);
    CHECK(u.su_cost == 909.0);
  }
}

TEST_CASE("bundled instance: peak demand equals the column sum of the file") {
  std::ifstream in(kBundled);
  const auto raw = nlohmann::json::parse(in);
  const int T = raw["system"]["n_periods"].get<int>();
  std::vector<double> column(T, 0.0);
  for (const auto& c : raw["consumers"]) {
    for (int t = 0; t < T; ++t) column[t] += c["demand"][t].get<double>();
  }
  int peak = 0;
  for (int t = 1; t < T; ++t) {
    if (column[t] > column[peak]) peak = t;
  }
  CHECK(peak + 1 == 15);
  CHECK(column[peak] == doctest::Approx(1.4001).epsilon(1e-12));
  const auto inst = io::read_instance(kBundled);
  CHECK(total_demand(inst, peak + 1) == doctest::Approx(column[peak]).epsilon(1e-14));
}

TEST_CASE("bundled instance: family counts match the closed forms") {
  // W = 6 buses x (11 + 16 + 7) window periods = 204 charge-point periods.
  const auto inst = io::read_instance(kBundled);
  const auto f = build(inst, mode(CaseMode::GeneratorsAndPevs));
  const std::map<std::string, int> rows{
      {"Eq2", 1536},  {"Eq4", 1512},  {"Eq5", 144},   {"Eq6", 48},    {"Eq7", 72},    {"Eq8", 72},
      {"Eq9", 72},    {"Eq10", 72},   {"Eq18", 288},  {"Eq19", 288},  {"Eq21", 120},  {"Eq22", 120},
      {"UDCAP", 3840}, {"Eq25", 1224}, {"Eq28", 1020}, {"Eq29", 1020}, {"Eq30", 1020}, {"Eq31", 1020},
      {"Eq34", 1020}, {"Eq35", 1020}, {"Eq37", 1020}};
  CHECK(row_counts(f) == rows);
  CHECK(f.model.num_rows() == 16548);
  CHECK(f.model.num_columns() == 15504);
  const std::map<std::string, int> cols{
      {"p", 120},     {"s", 48},      {"u", 72},      {"csu", 72},    {"csd", 72},    {"pl", 1512},
      {"theta", 1536}, {"pud", 768},  {"ec", 204},    {"ed", 204},    {"ev", 1224},   {"cvpr", 204},
      {"df", 120},    {"ppr", 408},   {"pudpr", 3840}, {"ecpr", 1020}, {"edpr", 1020}, {"pprc", 1020},
      {"pprd", 1020}, {"pvpr", 1020}};
  CHECK(column_counts(f) == cols);
  const auto f1 = build(inst, mode(CaseMode::NoReserve));
  CHECK(f1.model.num_rows() == 3732);
  CHECK(f1.model.num_columns() == 4812);
  CHECK(f1.model.num_binaries() == 72);
}
