#include "lrt/lrt.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "lrt/dynamics.hpp"
#include "lrt/errors.hpp"
#include "lrt/geometry.hpp"
#include "lrt/harness.hpp"
#include "lrt/noise.hpp"
#include "lrt/schedule.hpp"
#include "lrt/serialize.hpp"

struct lrt_config {
  lrt::ProtocolConfig cfg;
};

struct lrt_schedule {
  lrt::Schedule sched;
  lrt::RuntimeSummary summary;
};

struct lrt_sweep {
  lrt::SweepResult result;
};

struct lrt_tradeoff {
  std::vector<lrt::TradeoffCurve> curves;
};

namespace {

thread_local std::string g_last_error;

lrt_status fail(lrt_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class Fn>
lrt_status guard(Fn&& fn) {
  try {
    fn();
    return LRT_OK;
  } catch (const lrt::InvalidArgument& e) {
    return fail(LRT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const lrt::CapacityError& e) {
    return fail(LRT_ERR_CAPACITY, e.what());
  } catch (const lrt::NumericalError& e) {
    return fail(LRT_ERR_NUMERICAL, e.what());
  } catch (const lrt::IoError& e) {
    return fail(LRT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LRT_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return fail(LRT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LRT_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw lrt::InvalidArgument(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class T>
lrt_status set_field(lrt_config* c, T lrt::ProtocolConfig::*field, T value) {
  return guard([&] {
    need(c, "config");
    c->cfg.*field = value;
  });
}

}  // namespace

extern "C" {

const char* lrt_version(void) { return "0.1.0"; }

const char* lrt_last_error(void) { return g_last_error.c_str(); }

const char* lrt_status_name(lrt_status status) {
  switch (status) {
    case LRT_OK: return "ok";
    case LRT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LRT_ERR_CAPACITY: return "capacity exceeded";
    case LRT_ERR_NUMERICAL: return "numerical failure";
    case LRT_ERR_IO: return "i/o error";
    case LRT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void lrt_string_free(char* s) { std::free(s); }

lrt_status lrt_config_create(lrt_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new lrt_config();
  });
}

void lrt_config_destroy(lrt_config* cfg) { delete cfg; }

lrt_status lrt_config_set_d(lrt_config* c, int d) { return set_field(c, &lrt::ProtocolConfig::d, d); }
lrt_status lrt_config_set_alpha(lrt_config* c, double v) { return set_field(c, &lrt::ProtocolConfig::alpha, v); }
lrt_status lrt_config_set_h0(lrt_config* c, double v) { return set_field(c, &lrt::ProtocolConfig::h0, v); }
lrt_status lrt_config_set_n(lrt_config* c, int n) { return set_field(c, &lrt::ProtocolConfig::n, n); }
lrt_status lrt_config_set_beta(lrt_config* c, double v) { return set_field(c, &lrt::ProtocolConfig::beta, v); }
lrt_status lrt_config_set_epsilon(lrt_config* c, double v) {
  return set_field(c, &lrt::ProtocolConfig::epsilon, v);
}
lrt_status lrt_config_set_m(lrt_config* c, int m) { return set_field(c, &lrt::ProtocolConfig::m, m); }
lrt_status lrt_config_set_seed(lrt_config* c, uint64_t seed) {
  return set_field<std::uint64_t>(c, &lrt::ProtocolConfig::seed, seed);
}

lrt_status lrt_config_set_variant(lrt_config* c, const char* v) {
  return guard([&] {
    need(c, "config");
    need(v, "variant");
    c->cfg.variant = lrt::parse_variant(v);
  });
}

lrt_status lrt_config_set_convention(lrt_config* c, const char* v) {
  return guard([&] {
    need(c, "config");
    need(v, "convention");
    c->cfg.convention = lrt::parse_convention(v);
  });
}

lrt_status lrt_config_set_policy(lrt_config* c, const char* v) {
  return guard([&] {
    need(c, "config");
    need(v, "policy");
    c->cfg.redraw = lrt::parse_redraw(v);
  });
}

lrt_status lrt_config_load_json(lrt_config* c, const char* json) {
  return guard([&] {
    need(c, "config");
    need(json, "json");
    c->cfg = lrt::config_from_json(json, c->cfg);
  });
}

lrt_status lrt_config_to_json(const lrt_config* c, char** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    *out = dup_string(lrt::config_to_json(c->cfg));
  });
}

lrt_status lrt_config_validate(const lrt_config* c) {
  return guard([&] {
    need(c, "config");
    c->cfg.validate();
  });
}

lrt_status lrt_schedule_build(const lrt_config* c, lrt_schedule** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    c->cfg.validate();
    const lrt::Geometry geom = lrt::build_geometry(c->cfg);
    auto* s = new lrt_schedule();
    try {
      s->sched = lrt::build_schedule(c->cfg, geom);
      s->summary = lrt::runtime_closed_form(c->cfg, geom);
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

void lrt_schedule_destroy(lrt_schedule* s) { delete s; }

lrt_status lrt_schedule_step_count(const lrt_schedule* s, size_t* count) {
  return guard([&] {
    need(s, "schedule");
    need(count, "count");
    *count = s->sched.steps.size();
  });
}

lrt_status lrt_schedule_step(const lrt_schedule* s, size_t index, lrt_step_info* out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    if (index >= s->sched.steps.size()) throw lrt::InvalidArgument("step index out of range");
    const auto& st = s->sched.steps[index];
    out->q = st.q;
    out->collapse = st.phase == lrt::Phase::Collapse ? 1 : 0;
    out->sign = st.sign;
    out->duration = st.duration;
    out->reference_coupling = st.reference_coupling;
  });
}

lrt_status lrt_schedule_total_runtime(const lrt_schedule* s, double* out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    *out = s->sched.total_runtime;
  });
}

lrt_status lrt_schedule_closed_form(const lrt_schedule* s, double* closed_form, double* paper_bound) {
  return guard([&] {
    need(s, "schedule");
    if (closed_form) *closed_form = s->summary.closed_form;
    if (paper_bound) *paper_bound = s->summary.paper_bound;
  });
}

lrt_status lrt_schedule_to_json(const lrt_schedule* s, char** out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    *out = dup_string(lrt::schedule_to_json(s->sched, s->summary));
  });
}

lrt_status lrt_run_single(const lrt_config* c, uint64_t trial, lrt_trial_result* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    lrt::TrialOptions opts;
    opts.record_uniformity = false;
    const auto r = lrt::run_single(c->cfg, trial, opts);
    out->p_final = r.p_final;
    out->runtime = r.runtime;
  });
}

lrt_status lrt_run_single_json(const lrt_config* c, uint64_t trial, int record_step_errors, char** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    lrt::TrialOptions opts;
    opts.record_step_errors = record_step_errors != 0;
    *out = dup_string(lrt::trial_to_json(lrt::run_single(c->cfg, trial, opts)));
  });
}

lrt_status lrt_run_multi(const lrt_config* c, uint64_t trial, double* fidelities, size_t capacity, size_t* count,
                         double* aggregate, double* runtime) {
  return guard([&] {
    need(c, "config");
    const auto r = lrt::run_multi(c->cfg, trial);
    if (fidelities != nullptr && capacity < r.fidelities.size())
      throw lrt::InvalidArgument("fidelity buffer holds " + std::to_string(capacity) + " values, need " +
                                 std::to_string(r.fidelities.size()));
    if (fidelities != nullptr) std::copy(r.fidelities.begin(), r.fidelities.end(), fidelities);
    if (count) *count = r.fidelities.size();
    if (aggregate) *aggregate = r.aggregate;
    if (runtime) *runtime = r.runtime;
  });
}

lrt_status lrt_run_multi_json(const lrt_config* c, uint64_t trial, char** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    *out = dup_string(lrt::multi_to_json(lrt::run_multi(c->cfg, trial)));
  });
}

lrt_status lrt_sweep_run(const lrt_config* base, const char* axis, const double* values, size_t count, size_t trials,
                         unsigned threads, double gamma, lrt_sweep** out) {
  return guard([&] {
    need(base, "config");
    need(axis, "axis");
    need(out, "out");
    if (count > 0) need(values, "values");
    lrt::ExperimentPlan plan;
    plan.base = base->cfg;
    plan.axis = lrt::parse_axis(axis);
    plan.values.assign(values, values + count);
    plan.trials = trials;
    plan.threads = threads;
    plan.gamma = gamma;
    auto* s = new lrt_sweep();
    try {
      s->result = lrt::monte_carlo(plan);
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

void lrt_sweep_destroy(lrt_sweep* s) { delete s; }

lrt_status lrt_sweep_record_count(const lrt_sweep* s, size_t* count) {
  return guard([&] {
    need(s, "sweep");
    need(count, "count");
    *count = s->result.records.size();
  });
}

lrt_status lrt_sweep_record_at(const lrt_sweep* s, size_t index, lrt_sweep_record* out) {
  return guard([&] {
    need(s, "sweep");
    need(out, "out");
    if (index >= s->result.records.size()) throw lrt::InvalidArgument("record index out of range");
    const auto& r = s->result.records[index];
    out->value = r.value;
    out->mean_p_final = r.mean_p_final;
    out->std_error = r.std_error;
    out->trials = r.trials;
    out->runtime_total = r.runtime_total;
    out->has_bound = r.bound ? 1 : 0;
    out->bound = r.bound.value_or(0.0);
  });
}

lrt_status lrt_sweep_failure_count(const lrt_sweep* s, size_t* count) {
  return guard([&] {
    need(s, "sweep");
    need(count, "count");
    *count = s->result.failures.size();
  });
}

lrt_status lrt_sweep_failure_message(const lrt_sweep* s, size_t index, char** out) {
  return guard([&] {
    need(s, "sweep");
    need(out, "out");
    if (index >= s->result.failures.size()) throw lrt::InvalidArgument("failure index out of range");
    const auto& f = s->result.failures[index];
    char head[96];
    std::snprintf(head, sizeof head, "value %.17g trial %zu: ", f.value, f.trial);
    *out = dup_string(head + f.message);
  });
}

lrt_status lrt_sweep_to_string(const lrt_sweep* s, const char* format, char** out) {
  return guard([&] {
    need(s, "sweep");
    need(format, "format");
    need(out, "out");
    const auto fmt = lrt::parse_format(format);
    *out = dup_string(fmt == lrt::OutputFormat::Csv ? lrt::records_to_csv(s->result.records)
                                                    : lrt::records_to_json(s->result.records));
  });
}

lrt_status lrt_sweep_write(const lrt_sweep* s, const char* format, const char* path) {
  return guard([&] {
    need(s, "sweep");
    need(format, "format");
    need(path, "path");
    lrt::write_records(s->result.records, lrt::parse_format(format), path);
  });
}

namespace {
void copy_fit(const lrt::FitResult& f, lrt_fit_result* out) {
  out->a = f.a;
  out->b = f.b;
  out->stderr_a = f.stderr_a;
  out->points_used = f.points_used;
  out->r_squared = f.r_squared;
}
}  // namespace

lrt_status lrt_fit_file(const char* path, lrt_fit_result* out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    copy_fit(lrt::fit_power_law(lrt::read_records(path)), out);
  });
}

lrt_status lrt_fit_sweep(const lrt_sweep* s, lrt_fit_result* out) {
  return guard([&] {
    need(s, "sweep");
    need(out, "out");
    copy_fit(lrt::fit_power_law(s->result.records), out);
  });
}

lrt_status lrt_repeat_count(double p, double fidelity, size_t* out) {
  return guard([&] {
    need(out, "out");
    *out = lrt::repeat_count(p, fidelity);
  });
}

lrt_status lrt_tradeoff_run(const lrt_config* c, const double* fidelities, size_t n_fidelities, const double* betas,
                            size_t n_betas, size_t trials, unsigned threads, lrt_tradeoff** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    if (n_fidelities > 0) need(fidelities, "fidelities");
    if (n_betas > 0) need(betas, "betas");
    auto* t = new lrt_tradeoff();
    try {
      t->curves = lrt::tradeoff(std::vector<double>(fidelities, fidelities + n_fidelities),
                                std::vector<double>(betas, betas + n_betas), c->cfg, trials, threads);
    } catch (...) {
      delete t;
      throw;
    }
    *out = t;
  });
}

void lrt_tradeoff_destroy(lrt_tradeoff* t) { delete t; }

lrt_status lrt_tradeoff_curve_count(const lrt_tradeoff* t, size_t* count) {
  return guard([&] {
    need(t, "tradeoff");
    need(count, "count");
    *count = t->curves.size();
  });
}

lrt_status lrt_tradeoff_curve(const lrt_tradeoff* t, size_t index, double* fidelity, double* argmin_beta,
                              double* min_tau_star) {
  return guard([&] {
    need(t, "tradeoff");
    if (index >= t->curves.size()) throw lrt::InvalidArgument("curve index out of range");
    const auto& c = t->curves[index];
    if (fidelity) *fidelity = c.fidelity;
    if (argmin_beta) *argmin_beta = c.argmin_beta;
    if (min_tau_star) *min_tau_star = c.min_tau_star;
  });
}

lrt_status lrt_tradeoff_to_string(const lrt_tradeoff* t, const char* format, char** out) {
  return guard([&] {
    need(t, "tradeoff");
    need(format, "format");
    need(out, "out");
    const auto fmt = lrt::parse_format(format);
    *out = dup_string(fmt == lrt::OutputFormat::Csv ? lrt::tradeoff_to_csv(t->curves)
                                                    : lrt::tradeoff_to_json(t->curves));
  });
}

lrt_status lrt_bounds_json(const lrt_config* c, double gamma, char** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    *out = dup_string(lrt::bounds_to_json(lrt::bound_report(c->cfg, gamma)));
  });
}

lrt_status lrt_layout_json(const lrt_config* c, char** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    c->cfg.validate();
    *out = dup_string(lrt::layout_to_json(lrt::build_geometry(c->cfg)));
  });
}

}  // extern "C"
