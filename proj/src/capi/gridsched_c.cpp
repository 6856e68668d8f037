#include "gridsched/gridsched.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "gridsched/evaluate.hpp"
#include "gridsched/io.hpp"

struct gs_instance {
  gridsched::Instance value;
};

struct gs_result {
  gridsched::io::ResultBundle bundle;
  gs_mip_status status = GS_MIP_INFEASIBLE;
  bool has_incumbent = false;
  std::string status_name;
  std::string comparison;
};

namespace {

using namespace gridsched;

static_assert(static_cast<int>(milp::MipStatus::Optimal) == GS_MIP_OPTIMAL);
static_assert(static_cast<int>(milp::MipStatus::Feasible) == GS_MIP_FEASIBLE);
static_assert(static_cast<int>(milp::MipStatus::Infeasible) == GS_MIP_INFEASIBLE);
static_assert(static_cast<int>(milp::MipStatus::GapLimit) == GS_MIP_GAP_LIMIT);
static_assert(static_cast<int>(milp::MipStatus::NodeLimit) == GS_MIP_NODE_LIMIT);
static_assert(static_cast<int>(milp::MipStatus::TimeLimit) == GS_MIP_TIME_LIMIT);

struct Problem {
  std::string code, message, pointer;
};

thread_local std::string last_error;
thread_local std::vector<Problem> last_problems;

gs_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return GS_ERR_IO;
    case ErrorCode::Parse: return GS_ERR_PARSE;
    case ErrorCode::Schema: return GS_ERR_SCHEMA;
    case ErrorCode::Validation: return GS_ERR_VALIDATION;
    case ErrorCode::InvalidModel: return GS_ERR_INVALID_MODEL;
    case ErrorCode::UnknownRow: return GS_ERR_UNKNOWN_ROW;
    case ErrorCode::DimensionMismatch: return GS_ERR_DIMENSION;
    case ErrorCode::PatternLimit: return GS_ERR_PATTERN_LIMIT;
    case ErrorCode::Solver: return GS_ERR_SOLVER;
    case ErrorCode::Argument: return GS_ERR_ARGUMENT;
  }
  return GS_ERR_INTERNAL;
}

gs_status fail(gs_status s, std::string message) {
  last_error = std::move(message);
  return s;
}

// Runs f and turns any exception into a status plus message.
template <class F>
gs_status guarded(F&& f) noexcept {
  try {
    return f();
  } catch (const io::InstanceError& e) {
    last_problems.clear();
    for (const auto& p : e.problems()) last_problems.push_back({p.code, p.message, p.pointer});
    return fail(status_of(e.code()), e.what());
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GS_ERR_INTERNAL, "unknown failure");
  }
}

CaseConfig config_of(const gs_solve_options& o) {
  CaseConfig c;
  c.mode = case_from_number(o.case_number);
  c.per_consumer_freq_penalty = o.per_consumer_freq_penalty != 0;
  c.literal_deployment_cost = o.literal_deployment_cost != 0;
  return c;
}

milp::SolverConfig solver_of(const gs_solve_options& o) {
  milp::SolverConfig s;
  s.rel_gap = o.rel_gap;
  s.abs_gap = o.abs_gap;
  s.node_limit = o.node_limit;
  s.time_limit = o.time_limit;
  return s;
}

void finish(gs_result& r) {
  r.status_name = r.bundle.run.status;
  r.comparison = io::comparison_row(r.bundle.config, r.bundle.report);
}

}  // namespace

extern "C" {

const char* gs_version(void) { return "1.0.0"; }

const char* gs_status_name(gs_status status) {
  switch (status) {
    case GS_OK: return "OK";
    case GS_ERR_IO: return "IO";
    case GS_ERR_PARSE: return "PARSE";
    case GS_ERR_SCHEMA: return "SCHEMA";
    case GS_ERR_VALIDATION: return "VALIDATION";
    case GS_ERR_INVALID_MODEL: return "INVALID_MODEL";
    case GS_ERR_UNKNOWN_ROW: return "UNKNOWN_ROW";
    case GS_ERR_DIMENSION: return "DIMENSION_MISMATCH";
    case GS_ERR_PATTERN_LIMIT: return "PATTERN_LIMIT";
    case GS_ERR_SOLVER: return "SOLVER";
    case GS_ERR_ARGUMENT: return "ARGUMENT";
    case GS_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* gs_last_error(void) { return last_error.c_str(); }

size_t gs_last_problem_count(void) { return last_problems.size(); }

gs_status gs_last_problem(size_t i, const char** code, const char** message, const char** pointer) {
  if (i >= last_problems.size()) return fail(GS_ERR_ARGUMENT, "problem index out of range");
  if (code) *code = last_problems[i].code.c_str();
  if (message) *message = last_problems[i].message.c_str();
  if (pointer) *pointer = last_problems[i].pointer.c_str();
  return GS_OK;
}

gs_status gs_instance_read(const char* path, gs_instance** out) {
  if (!path || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  last_problems.clear();
  return guarded([&] {
    *out = new gs_instance{io::read_instance(path)};
    return GS_OK;
  });
}

gs_status gs_instance_parse(const char* json, size_t length, gs_instance** out) {
  if (!json || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  last_problems.clear();
  return guarded([&] {
    *out = new gs_instance{io::parse_instance(std::string_view(json, length))};
    return GS_OK;
  });
}

gs_status gs_instance_write(const gs_instance* instance, const char* path) {
  if (!instance || !path) return fail(GS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    io::write_instance(instance->value, path);
    return GS_OK;
  });
}

void gs_instance_free(gs_instance* instance) { delete instance; }

gs_status gs_instance_get_shape(const gs_instance* instance, gs_instance_shape* out) {
  if (!instance || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& i = instance->value;
    out->buses = static_cast<int>(i.buses.size());
    out->lines = static_cast<int>(i.lines.size());
    out->conventional_units = static_cast<int>(i.conventional_units.size());
    out->renewable_units = static_cast<int>(i.renewable_units.size());
    out->consumers = static_cast<int>(i.consumers.size());
    out->pev_groups = static_cast<int>(i.pev_groups.size());
    out->charge_points = static_cast<int>(InstanceIndex(i).charge_points().size());
    out->contingencies = static_cast<int>(i.contingencies.size());
    out->periods = i.system.n_periods;
    return GS_OK;
  });
}

void gs_solve_options_init(gs_solve_options* o) {
  if (!o) return;
  const milp::SolverConfig d;
  *o = gs_solve_options{};
  o->case_number = 3;
  o->rel_gap = d.rel_gap;
  o->abs_gap = d.abs_gap;
  o->node_limit = d.node_limit;
  o->time_limit = d.time_limit;
  o->threads = 1;
}

gs_status gs_solve(const gs_instance* instance, const gs_solve_options* options, gs_result** out) {
  if (!instance || !options || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (options->case_number < 1 || options->case_number > 3) {
      return fail(GS_ERR_ARGUMENT, "case must be 1, 2 or 3");
    }
    const CaseConfig config = config_of(*options);
    milp::SolverConfig solver = solver_of(*options);
    if (options->start && options->start->has_incumbent) {
      solver.start_binaries = commitment_start(build(instance->value, config), options->start->bundle.schedule);
    }
    ExPostOptions ex;
    ex.pev_reserve = options->ex_post_pev_reserve != 0;
    ex.threads = options->threads;
    ex.solver = solver;
    ex.solver.start_binaries.clear();
    const CaseResult res = solve_case(instance->value, config, solver, ex);
    auto r = std::make_unique<gs_result>();
    r->bundle = io::make_bundle(res, solver, options->seed);
    r->status = static_cast<gs_mip_status>(res.mip.status);
    r->has_incumbent = res.mip.has_incumbent;
    finish(*r);
    *out = r.release();
    return GS_OK;
  });
}

gs_status gs_result_read(const gs_instance* instance, const char* dir, gs_result** out) {
  if (!instance || !dir || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<gs_result>();
    r->bundle = io::read_results(instance->value, dir);
    r->has_incumbent = false;
    for (int s = GS_MIP_OPTIMAL; s <= GS_MIP_TIME_LIMIT; ++s) {
      const auto m = static_cast<milp::MipStatus>(s);
      if (milp::to_string(m) == r->bundle.run.status) {
        r->status = static_cast<gs_mip_status>(s);
        r->has_incumbent = m == milp::MipStatus::Optimal || m == milp::MipStatus::Feasible ||
                           m == milp::MipStatus::GapLimit;
      }
    }
    finish(*r);
    *out = r.release();
    return GS_OK;
  });
}

gs_status gs_result_ex_post(const gs_instance* instance, const gs_result* result, int pev_reserve, int threads,
                            gs_result** out) {
  if (!instance || !result || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    ExPostOptions ex;
    ex.pev_reserve = pev_reserve != 0;
    ex.threads = threads;
    auto r = std::make_unique<gs_result>(*result);
    auto base = result->bundle.config;
    base.mode = CaseMode::NoReserve;
    base.contingencies.reset();
    auto schedule = result->bundle.schedule;
    if (!ex.pev_reserve) schedule.capacity_reserved = Matrix(schedule.capacity_reserved.rows, schedule.capacity_reserved.cols);
    const auto post = evaluate_ex_post(instance->value, schedule, base, ex);
    r->bundle.config = base;
    r->bundle.schedule = post.schedule;
    r->bundle.response = post.response;
    r->bundle.report = post.report;
    finish(*r);
    *out = r.release();
    return GS_OK;
  });
}

gs_status gs_result_info(const gs_result* result, gs_run_info* out) {
  if (!result || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  const auto& run = result->bundle.run;
  out->case_number = case_number(result->bundle.config.mode);
  out->status = result->status;
  out->status_name = result->status_name.c_str();
  out->has_incumbent = result->has_incumbent ? 1 : 0;
  out->objective = run.objective;
  out->best_bound = run.best_bound;
  out->gap = run.gap;
  out->nodes = run.nodes;
  out->seconds = run.seconds;
  out->rows = run.rows;
  out->columns = run.columns;
  return GS_OK;
}

gs_status gs_result_costs(const gs_result* result, gs_costs* out) {
  if (!result || !out) return fail(GS_ERR_ARGUMENT, "null argument");
  const auto& c = result->bundle.report;
  *out = gs_costs{c.production,  c.startup,   c.shutdown,     c.unserved,       c.spill,
                  c.unserved_pr, c.frequency, c.pev_capacity, c.pev_deployment, c.total};
  return GS_OK;
}

gs_status gs_result_write(const gs_result* result, const gs_instance* instance, const char* dir) {
  if (!result || !instance || !dir) return fail(GS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!result->has_incumbent) return fail(GS_ERR_ARGUMENT, "result has no solution to write");
    io::write_results(instance->value, result->bundle, dir);
    return GS_OK;
  });
}

gs_status gs_result_check(const gs_result* result, const gs_instance* instance, double tolerance,
                          size_t* violations) {
  if (!result || !instance || !violations) return fail(GS_ERR_ARGUMENT, "null argument");
  last_problems.clear();
  return guarded([&] {
    const auto& b = result->bundle;
    const auto residuals = check_feasibility(instance->value, b.config, b.schedule, b.response, tolerance);
    for (const auto& r : residuals) last_problems.push_back({r.equation, r.describe(), ""});
    *violations = residuals.size();
    return GS_OK;
  });
}

const char* gs_comparison_header(void) {
  static const std::string header = io::comparison_header();
  return header.c_str();
}

const char* gs_result_comparison_row(const gs_result* result) {
  return result ? result->comparison.c_str() : "";
}

void gs_result_free(gs_result* result) { delete result; }

gs_status gs_export_mps(const gs_instance* instance, const gs_solve_options* options, const char* path) {
  if (!instance || !options || !path) return fail(GS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (options->case_number < 1 || options->case_number > 3) {
      return fail(GS_ERR_ARGUMENT, "case must be 1, 2 or 3");
    }
    io::export_mps(build(instance->value, config_of(*options)).model, path);
    return GS_OK;
  });
}

}  // extern "C"
