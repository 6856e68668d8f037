// Command-line front end. Talks to the library only through gridsched.h.
//
// Exit codes: 0 ok, 1 invalid instance / infeasible / check failed,
// 2 I/O, parse or unusable input, 3 limit hit without a solution, 64 usage.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "gridsched/gridsched.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInput = 2, kLimit = 3, kUsage = 64 };

struct InstanceFree {
  void operator()(gs_instance* p) const { gs_instance_free(p); }
};
struct ResultFree {
  void operator()(gs_result* p) const { gs_result_free(p); }
};
using InstancePtr = std::unique_ptr<gs_instance, InstanceFree>;
using ResultPtr = std::unique_ptr<gs_result, ResultFree>;

void log(const std::string& msg) { std::fprintf(stderr, "gridsched: %s\n", msg.c_str()); }

void log_error(gs_status s) { log(std::string(gs_status_name(s)) + ": " + gs_last_error()); }

int threads_from_env() {
  const char* v = std::getenv("GRIDSCHED_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 256) {
    log(std::string("ignoring GRIDSCHED_THREADS=") + v);
    return 1;
  }
  return static_cast<int>(n);
}

// Prints the findings of the last call, one per line.
void print_problems(std::FILE* to) {
  for (size_t i = 0; i < gs_last_problem_count(); ++i) {
    const char *code = nullptr, *message = nullptr, *pointer = nullptr;
    gs_last_problem(i, &code, &message, &pointer);
    if (pointer && *pointer) std::fprintf(to, "%s %s %s\n", pointer, code, message);
    else std::fprintf(to, "%s %s\n", code, message);
  }
}

// Loads an instance; anything other than a clean read is exit 2 for the
// commands that need a usable instance.
int load(const std::string& path, InstancePtr& out) {
  gs_instance* raw = nullptr;
  const gs_status s = gs_instance_read(path.c_str(), &raw);
  out.reset(raw);
  if (s == GS_OK) return kOk;
  log_error(s);
  print_problems(stderr);
  return kInput;
}

struct SolveFlags {
  int case_number = 3;
  double gap = -1.0;
  long node_limit = -1;
  long seed = 0;
};

gs_solve_options options_of(const SolveFlags& f) {
  gs_solve_options o;
  gs_solve_options_init(&o);
  o.case_number = f.case_number;
  if (f.gap >= 0.0) o.rel_gap = f.gap;
  if (f.node_limit >= 0) o.node_limit = f.node_limit;
  o.seed = f.seed;
  o.threads = threads_from_env();
  return o;
}

void print_summary(const gs_result* r) {
  gs_run_info info;
  gs_result_info(r, &info);
  std::printf("case %d status %s objective %.10g gap %.3g nodes %ld time %.2fs\n", info.case_number,
              info.status_name, info.objective, info.gap, info.nodes, info.seconds);
  std::fflush(stdout);
}

// Solves one case; on success writes the bundle to out_dir (if not empty).
int solve_one(const gs_instance* inst, gs_solve_options o, const std::string& out_dir, ResultPtr& out) {
  log("solving case " + std::to_string(o.case_number));
  gs_result* raw = nullptr;
  const gs_status s = gs_solve(inst, &o, &raw);
  out.reset(raw);
  if (s != GS_OK) {
    log_error(s);
    return s == GS_ERR_SOLVER ? kInvalid : kInput;
  }
  gs_run_info info;
  gs_result_info(raw, &info);
  log("case " + std::to_string(o.case_number) + ": " + info.status_name + ", " + std::to_string(info.rows) +
      " rows, " + std::to_string(info.columns) + " columns");
  if (!info.has_incumbent) {
    if (info.status == GS_MIP_INFEASIBLE) {
      log("case " + std::to_string(o.case_number) + " is infeasible");
      return kInvalid;
    }
    log("limit reached before any feasible schedule was found");
    return kLimit;
  }
  if (info.status != GS_MIP_OPTIMAL) log(std::string("stopped early: ") + info.status_name);
  if (!out_dir.empty()) {
    const gs_status w = gs_result_write(raw, inst, out_dir.c_str());
    if (w != GS_OK) {
      log_error(w);
      return kInput;
    }
  }
  return kOk;
}

int run_validate(const std::string& path) {
  gs_instance* raw = nullptr;
  const gs_status s = gs_instance_read(path.c_str(), &raw);
  InstancePtr inst(raw);
  if (s == GS_OK) return kOk;
  if (s == GS_ERR_VALIDATION || s == GS_ERR_SCHEMA) {
    print_problems(stdout);
    return kInvalid;
  }
  log_error(s);
  return kInput;
}

int run_solve(const std::string& path, const SolveFlags& flags, const std::string& out_dir) {
  InstancePtr inst;
  if (int rc = load(path, inst)) return rc;
  ResultPtr result;
  const int rc = solve_one(inst.get(), options_of(flags), out_dir, result);
  if (rc == kOk) print_summary(result.get());
  return rc;
}

int run_evaluate(const std::string& path, const std::string& results, bool ex_post, bool pev_reserve,
                 double tolerance, const std::string& out_dir) {
  InstancePtr inst;
  if (int rc = load(path, inst)) return rc;
  gs_result* raw = nullptr;
  gs_status s = gs_result_read(inst.get(), results.c_str(), &raw);
  ResultPtr result(raw);
  if (s != GS_OK) {
    log_error(s);
    return kInput;
  }
  if (ex_post) {
    log("re-evaluating contingencies");
    gs_result* post = nullptr;
    s = gs_result_ex_post(inst.get(), result.get(), pev_reserve ? 1 : 0, threads_from_env(), &post);
    if (s != GS_OK) {
      log_error(s);
      return s == GS_ERR_SOLVER ? kInvalid : kInput;
    }
    result.reset(post);
  }
  size_t violations = 0;
  s = gs_result_check(result.get(), inst.get(), tolerance, &violations);
  if (s != GS_OK) {
    log_error(s);
    return kInput;
  }
  print_problems(stdout);
  if (!out_dir.empty()) {
    s = gs_result_write(result.get(), inst.get(), out_dir.c_str());
    if (s != GS_OK) {
      log_error(s);
      return kInput;
    }
  }
  gs_costs c;
  gs_result_costs(result.get(), &c);
  std::printf("violations %zu total %.10g unserved_pr %.10g\n", violations, c.total, c.unserved_pr);
  return violations == 0 ? kOk : kInvalid;
}

int run_export(const std::string& path, int case_number, const std::string& out) {
  InstancePtr inst;
  if (int rc = load(path, inst)) return rc;
  gs_solve_options o;
  gs_solve_options_init(&o);
  o.case_number = case_number;
  const gs_status s = gs_export_mps(inst.get(), &o, out.c_str());
  if (s != GS_OK) {
    log_error(s);
    return kInput;
  }
  return kOk;
}

int run_compare(const std::string& path, SolveFlags flags, const std::string& out_dir) {
  InstancePtr inst;
  if (int rc = load(path, inst)) return rc;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    log("cannot create '" + out_dir + "': " + ec.message());
    return kInput;
  }
  // Case 2's commitment is feasible for Case 3, so it seeds that search.
  ResultPtr results[3];
  for (int c : {2, 3, 1}) {
    flags.case_number = c;
    gs_solve_options o = options_of(flags);
    if (c == 3) o.start = results[1].get();
    const std::string dir = (fs::path(out_dir) / ("case" + std::to_string(c))).string();
    if (int rc = solve_one(inst.get(), o, dir, results[c - 1])) return rc;
  }
  const fs::path csv = fs::path(out_dir) / "comparison.csv";
  std::ofstream f(csv, std::ios::binary | std::ios::trunc);
  f << gs_comparison_header() << "\n";
  for (const auto& r : results) f << gs_result_comparison_row(r.get()) << "\n";
  f.flush();
  if (!f) {
    log("cannot write '" + csv.string() + "'");
    return kInput;
  }
  for (const auto& r : results) print_summary(r.get());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Day-ahead unit commitment with PEV frequency reserve"};
  app.set_version_flag("--version", std::string(gs_version()));
  app.require_subcommand(1, 1);

  std::string instance, out, results, format;
  SolveFlags flags;
  bool ex_post = false, pev_reserve = false;
  double tolerance = 1e-6;

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("--instance", instance, "Instance JSON")->required();

  auto add_limits = [&](CLI::App* cmd) {
    cmd->add_option("--gap", flags.gap, "Relative optimality gap")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--node-limit", flags.node_limit, "Branch-and-bound node limit")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", flags.seed, "Recorded in meta.json");
  };

  auto* solve = app.add_subcommand("solve", "Solve one case and write a result bundle");
  solve->add_option("--instance", instance, "Instance JSON")->required();
  solve->add_option("--case", flags.case_number, "1 no reserve, 2 generators, 3 generators and PEVs")
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));
  solve->add_option("--out", out, "Result bundle directory")->required();
  add_limits(solve);

  auto* evaluate = app.add_subcommand("evaluate", "Check a result bundle against the instance");
  evaluate->add_option("--instance", instance, "Instance JSON")->required();
  evaluate->add_option("--results", results, "Result bundle directory")->required();
  evaluate->add_flag("--ex-post", ex_post, "Recompute the contingency response of the schedule");
  evaluate->add_flag("--pev-reserve", pev_reserve, "Let PEVs respond during the recomputation");
  evaluate->add_option("--tolerance", tolerance, "Residual tolerance")->check(CLI::PositiveNumber);
  evaluate->add_option("--out", out, "Write the evaluated bundle here");

  auto* exporter = app.add_subcommand("export", "Write the model of one case");
  exporter->add_option("--instance", instance, "Instance JSON")->required();
  exporter->add_option("--case", flags.case_number, "Case number")->required()->check(CLI::IsMember({1, 2, 3}));
  exporter->add_option("--format", format, "Output format")->required()->check(CLI::IsMember({"mps"}));
  exporter->add_option("--out", out, "Output file")->required();

  auto* compare = app.add_subcommand("compare", "Solve all three cases and tabulate costs");
  compare->add_option("--instance", instance, "Instance JSON")->required();
  compare->add_option("--out", out, "Output directory")->required();
  add_limits(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (pev_reserve && !ex_post) {
    log("--pev-reserve needs --ex-post");
    return kUsage;
  }

  if (*validate) return run_validate(instance);
  if (*solve) return run_solve(instance, flags, out);
  if (*evaluate) return run_evaluate(instance, results, ex_post, pev_reserve, tolerance, out);
  if (*exporter) return run_export(instance, flags.case_number, out);
  return run_compare(instance, flags, out);
}
