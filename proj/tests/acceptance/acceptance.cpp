// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// The bundled-instance solves take about a minute on one core; everything
// else is small.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gridsched/evaluate.hpp"
#include "gridsched/io.hpp"
#include "instances.hpp"
#include "json.hpp"
#include "lp_oracles.hpp"

using namespace gridsched;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

constexpr CaseMode kModes[] = {CaseMode::NoReserve, CaseMode::GeneratorsOnly, CaseMode::GeneratorsAndPevs};

CaseConfig config_of(CaseMode m) {
  CaseConfig c;
  c.mode = m;
  return c;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Corpus for criteria 1, 2, 4, 6, 7: random small instances plus the
// two-unit, six-period worst case for enumeration.
std::vector<Instance> corpus() {
  std::vector<Instance> out;
  for (std::uint64_t s = 0; s < 24; ++s) out.push_back(testing::random_small(s));
  for (std::uint64_t s = 11; s < 15; ++s) out.push_back(testing::two_unit_six_period(s));
  return out;
}

bool corpus_shape_ok(const Instance& i) {
  return i.conventional_units.size() <= 2 && i.system.n_periods <= 6 && i.buses.size() <= 3 &&
         i.contingencies.size() <= 2 && i.pev_groups.size() <= 1;
}

struct Solved {
  const Instance* inst;
  CaseResult result;
};

// Independent SOC bookkeeping: end-of-window energy against the initial
// energy plus net charged energy, for the base path and every contingency.
double soc_telescoping_error(const Instance& inst, const Schedule& s, const ContingencyResponse& r) {
  const InstanceIndex ix(inst);
  const auto& cps = ix.charge_points();
  double worst = 0.0;
  for (std::size_t c = 0; c < cps.size(); ++c) {
    const int ci = static_cast<int>(c);
    const auto& g = inst.pev_groups[cps[c].group];
    const double start = cps[c].count * g.e_initial;
    const int last = g.window_end - 1;
    double base = start;
    for (int t = g.window_start - 1; t <= last; ++t) {
      base += g.efficiency * s.e_charge(ci, t) - s.e_discharge(ci, t) / g.efficiency;
    }
    worst = std::max(worst, std::abs(s.soc(ci, last) - base));
    for (std::size_t k = 0; k < r.contingencies.size(); ++k) {
      double e = start;
      for (int t = g.window_start - 1; t <= last; ++t) {
        e += g.efficiency * (s.e_charge(ci, t) - r.e_charge_pr[k](ci, t)) -
             (s.e_discharge(ci, t) + r.e_discharge_pr[k](ci, t)) / g.efficiency;
      }
      worst = std::max(worst, std::abs(r.soc[k](ci, last) - e));
    }
  }
  return worst;
}

// Post-contingency power balance summed straight from the response tables.
double pfr_balance_error(const ContingencyResponse& r) {
  double worst = 0.0;
  for (std::size_t k = 0; k < r.contingencies.size(); ++k) {
    for (int t = 0; t < r.delta_f.cols; ++t) {
      double sum = 0.0;
      for (int g = 0; g < r.unit_response[k].rows; ++g) sum += r.unit_response[k](g, t);
      for (int d = 0; d < r.unserved[k].rows; ++d) sum += r.unserved[k](d, t);
      for (int c = 0; c < r.pev_response[k].rows; ++c) sum += r.pev_response[k](c, t);
      worst = std::max(worst, std::abs(sum));
    }
  }
  return worst;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Report {
  int failed = 0;
  void line(int id, const char* name, const Outcome& o) {
    std::printf("%s criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
};

}  // namespace

int main() {
  Report report;
  const fs::path data = GRIDSCHED_DATA_DIR;
  const fs::path scratch = fs::temp_directory_path() / ("gridsched_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);

  // Solve the corpus once; several criteria reuse the results.
  const auto instances = corpus();
  std::vector<Solved> solved;

  // 1. MIP against exhaustive commitment enumeration.
  {
    Outcome o;
    const auto t0 = Clock::now();
    int compared = 0;
    double worst = 0.0;
    for (const auto& inst : instances) {
      if (!corpus_shape_ok(inst)) o.fail("corpus instance outside the allowed shape");
      for (auto m : kModes) {
        auto res = solve_case(inst, config_of(m));
        const auto bf = brute_force_commitment(inst, config_of(m));
        if (res.mip.status != milp::MipStatus::Optimal || !bf.feasible) {
          o.fail("instance not solved to optimality");
          continue;
        }
        const double diff = std::abs(res.mip.objective - bf.objective);
        worst = std::max(worst, diff / std::max(1.0, std::abs(bf.objective)));
        if (diff > std::max(1e-6, 1e-6 * std::abs(bf.objective))) {
          o.fail(fmt("objective %.9g vs enumeration %.9g", res.mip.objective, bf.objective));
        }
        ++compared;
        solved.push_back({&inst, std::move(res)});
      }
    }
    const double secs = seconds_since(t0);
    if (instances.size() < 20) o.fail("corpus smaller than 20");
    if (secs >= 60.0) o.fail(fmt("took %.1f s", secs));
    if (o.pass) {
      o.detail = std::to_string(instances.size()) + " instances, " + std::to_string(compared) +
                 " case solves, worst relative difference " + fmt("%.2g, %.1f s", worst, secs);
    }
    report.line(1, "oracle equivalence", o);
  }

  // Bundled instance: Case 2, then Case 3 from Case 2's commitment, then Case 1.
  const auto bundled_t0 = Clock::now();
  const Instance bundled = io::read_instance(data / "unifap_synthetic.json");
  CaseResult bundled_res[3];
  {
    bundled_res[1] = solve_case(bundled, config_of(CaseMode::GeneratorsOnly));
    milp::SolverConfig warm;
    if (bundled_res[1].mip.has_incumbent) {
      warm.start_binaries =
          commitment_start(build(bundled, config_of(CaseMode::GeneratorsAndPevs)), bundled_res[1].schedule);
    }
    bundled_res[2] = solve_case(bundled, config_of(CaseMode::GeneratorsAndPevs), warm);
    bundled_res[0] = solve_case(bundled, config_of(CaseMode::NoReserve));
  }
  const double bundled_secs = seconds_since(bundled_t0);

  // 2. Every incumbent passes the independent equation check.
  {
    Outcome o;
    int checked = 0;
    auto check = [&](const Instance& inst, const CaseResult& r, const std::string& label) {
      if (!r.mip.has_incumbent) {
        o.fail(label + ": no incumbent");
        return;
      }
      const auto res = check_feasibility(inst, r.config, r.schedule, r.response, 1e-6);
      if (!res.empty()) o.fail(label + ": " + res[0].describe());
      ++checked;
    };
    for (std::size_t i = 0; i < solved.size(); ++i) check(*solved[i].inst, solved[i].result, "corpus " + std::to_string(i));
    for (int c = 0; c < 3; ++c) check(bundled, bundled_res[c], "bundled case " + std::to_string(c + 1));
    if (o.pass) o.detail = std::to_string(checked) + " incumbents, all residuals <= 1e-6";
    report.line(2, "feasibility oracle", o);
  }

  // 3. LP kernel on random bounded LPs.
  {
    Outcome o;
    double gap = 0.0, comp = 0.0;
    long pivots = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      testing::SplitMix64 shape(seed * 104729);
      const auto m = testing::random_bounded_lp(seed + 1000, shape.integer(5, 40), shape.integer(5, 50));
      const auto s = milp::solve_lp(m);
      if (s.status != milp::LpStatus::Optimal) {
        o.fail("seed " + std::to_string(seed) + " not optimal");
        continue;
      }
      const double g = std::abs(s.objective - testing::dual_objective(m, s.row_duals)) / (1.0 + std::abs(s.objective));
      const double k = testing::complementarity(m, s.x, s.row_duals);
      gap = std::max(gap, g);
      comp = std::max(comp, k);
      pivots = std::max(pivots, s.iterations);
      if (g > 1e-7) o.fail("seed " + std::to_string(seed) + fmt(" duality gap %.3g", g));
      if (k > 1e-7) o.fail("seed " + std::to_string(seed) + fmt(" complementarity %.3g", k));
      if (s.iterations >= 100000) o.fail("seed " + std::to_string(seed) + " took too many pivots");
      if (testing::primal_residual(m, s.x) > 1e-7) o.fail("seed " + std::to_string(seed) + " primal infeasible");
    }
    if (o.pass) {
      o.detail = "50 LPs, max relative gap " + fmt("%.2g, max complementarity %.2g", gap, comp) +
                 ", max pivots " + std::to_string(pivots);
    }
    report.line(3, "LP kernel", o);
  }

  // 4. Adding PEV reserve never makes the optimum worse.
  {
    Outcome o;
    int pairs = 0;
    auto compare = [&](double c2, double c3, const std::string& label) {
      if (c3 > c2 + 1e-6 * std::max(1.0, std::abs(c2))) o.fail(label + fmt(": case 3 %.9g > case 2 %.9g", c3, c2));
      ++pairs;
    };
    for (std::size_t i = 0; i + 2 < solved.size(); i += 3) {
      compare(solved[i + 1].result.mip.objective, solved[i + 2].result.mip.objective, "corpus " + std::to_string(i / 3));
    }
    compare(bundled_res[1].mip.objective, bundled_res[2].mip.objective, "bundled");
    if (o.pass) {
      o.detail = std::to_string(pairs) + " instances; bundled case 2 " +
                 fmt("%.6f, case 3 %.6f", bundled_res[1].mip.objective, bundled_res[2].mip.objective);
    }
    report.line(4, "case ordering", o);
  }

  // 5. Bundled-instance findings and golden costs.
  {
    Outcome o;
    const auto& c1 = bundled_res[0].report;
    const auto& c2 = bundled_res[1].report;
    const auto& c3 = bundled_res[2].report;
    for (const auto& r : bundled_res) {
      if (r.mip.status != milp::MipStatus::Optimal) o.fail("bundled case not solved to optimality");
    }
    if (c3.unserved_pr != 0.0) o.fail(fmt("case 3 post-contingency unserved cost %.9g", c3.unserved_pr));
    if (!(c1.unserved_pr > c2.unserved_pr && c1.unserved_pr > c3.unserved_pr)) {
      o.fail(fmt("case 1 unserved %.9g not strictly largest (case 2 %.9g, case 3 %.9g)", c1.unserved_pr, c2.unserved_pr,
                 c3.unserved_pr));
    }
    if (!(c3.pev_capacity > 0.0 && c3.pev_deployment > 0.0)) {
      o.fail(fmt("case 3 PEV capacity %.9g, deployment %.9g", c3.pev_capacity, c3.pev_deployment));
    }
    if (bundled_secs >= 600.0) o.fail(fmt("three cases took %.1f s", bundled_secs));
    for (int c = 0; c < 3; ++c) {
      const fs::path golden = data / "golden" / ("case" + std::to_string(c + 1) + "_costs.json");
      std::ifstream in(golden);
      if (!in) {
        o.fail("missing " + golden.string());
        continue;
      }
      const auto g = nlohmann::json::parse(in);
      const auto& r = bundled_res[c].report;
      const std::pair<const char*, double> got[] = {
          {"production", r.production},   {"startup", r.startup},
          {"shutdown", r.shutdown},       {"unserved", r.unserved},
          {"spill", r.spill},             {"unserved_pr", r.unserved_pr},
          {"frequency", r.frequency},     {"pev_capacity", r.pev_capacity},
          {"pev_deployment", r.pev_deployment}, {"total", r.total}};
      for (const auto& [key, v] : got) {
        const double want = g.at(key).get<double>();
        if (std::abs(v - want) > 1e-6 * std::max(1.0, std::abs(want))) {
          o.fail("case " + std::to_string(c + 1) + " " + key + fmt(" %.9g, golden %.9g", v, want));
        }
      }
    }
    if (o.pass) {
      o.detail = fmt("unserved_pr case 1 %.2f, case 2 %.2f, case 3 0", c1.unserved_pr, c2.unserved_pr) +
                 fmt("; case 3 cc %.2f, cp %.2f", c3.pev_capacity, c3.pev_deployment) +
                 fmt("; golden match; %.1f s", bundled_secs);
    }
    report.line(5, "bundled instance", o);
  }

  // 6. SOC telescoping and post-contingency balance.
  {
    Outcome o;
    double soc = 0.0, bal = 0.0;
    auto check = [&](const Instance& inst, const CaseResult& r) {
      if (!r.mip.has_incumbent) return;
      soc = std::max(soc, soc_telescoping_error(inst, r.schedule, r.response));
      bal = std::max(bal, pfr_balance_error(r.response));
    };
    for (const auto& s : solved) check(*s.inst, s.result);
    for (const auto& r : bundled_res) check(bundled, r);
    if (soc > 1e-8) o.fail(fmt("SOC telescoping error %.3g", soc));
    if (bal > 1e-6) o.fail(fmt("PFR balance residual %.3g", bal));
    if (o.pass) o.detail = fmt("max SOC error %.2g, max balance residual %.2g", soc, bal);
    report.line(6, "conservation", o);
  }

  // 7. Instance, result bundle and MPS formats.
  {
    Outcome o;
    int bundles = 0;
    auto round_trip = [&](const Instance& inst, const std::string& label) {
      const std::string text = io::serialize_instance(inst);
      const Instance back = io::parse_instance(text);
      if (!(back == inst) || io::serialize_instance(back) != text) o.fail(label + ": instance round trip differs");
    };
    auto bundle = [&](const Instance& inst, const CaseResult& r, const std::string& label) {
      const fs::path dir = scratch / label;
      io::write_results(inst, io::make_bundle(r, {}), dir);
      const auto back = io::read_results(inst, dir);
      const auto res = check_feasibility(inst, back.config, back.schedule, back.response, 1e-6);
      if (!res.empty()) o.fail(label + ": re-read bundle " + res[0].describe());
      ++bundles;
    };
    auto mps_twice = [&](const Instance& inst, CaseMode m, const std::string& label) {
      const auto f = build(inst, config_of(m));
      const fs::path a = scratch / (label + "_a.mps"), b = scratch / (label + "_b.mps");
      io::export_mps(f.model, a);
      io::export_mps(build(inst, config_of(m)).model, b);
      if (slurp(a) != slurp(b)) o.fail(label + ": MPS differs between runs");
      const auto back = io::read_mps(a);
      if (back.num_rows() != f.model.num_rows() || back.num_columns() != f.model.num_columns()) {
        o.fail(label + ": MPS re-read changes the shape");
      }
    };
    for (std::size_t i = 0; i < instances.size(); ++i) round_trip(instances[i], "corpus " + std::to_string(i));
    round_trip(bundled, "bundled");
    for (std::size_t i = 0; i < solved.size(); i += 7) {
      bundle(*solved[i].inst, solved[i].result, "corpus_" + std::to_string(i));
    }
    for (int c = 0; c < 3; ++c) bundle(bundled, bundled_res[c], "bundled_case" + std::to_string(c + 1));
    for (std::size_t i = 0; i < instances.size(); i += 5) mps_twice(instances[i], CaseMode::GeneratorsAndPevs, "corpus" + std::to_string(i));
    mps_twice(bundled, CaseMode::GeneratorsAndPevs, "bundled");
    if (o.pass) {
      o.detail = std::to_string(instances.size() + 1) + " instance round trips, " + std::to_string(bundles) +
                 " bundles re-read and checked, MPS byte-identical";
    }
    report.line(7, "formats", o);
  }

  std::error_code ec;
  fs::remove_all(scratch, ec);
  std::printf("%d of 7 criteria failed\n", report.failed);
  return report.failed == 0 ? 0 : 1;
}
