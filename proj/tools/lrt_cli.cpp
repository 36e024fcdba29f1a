// Command-line driver. Talks to the simulator only through the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrt/lrt.h"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int d = 1;
  double alpha = 1.0;
  double h0 = 1.0;
  int n = 1;
  std::string variant = "nested";
  double beta = 0.0;
  double epsilon = 0.0;
  int m = 1;
  std::uint64_t seed = 0;
  std::string convention = "corrected";
  std::string policy = "per-step";
  std::size_t trials = 1;
  std::uint64_t trial = 0;
  unsigned threads = 0;
  std::string out;
  std::string format;
  std::string config;
  // sweep / tradeoff / fit / bounds
  std::string axis = "n";
  std::vector<double> values;
  std::vector<double> fidelities;
  std::vector<double> betas;
  double gamma = 1.0;
  std::string in;
  bool step_errors = false;
};

void check(lrt_status s, bool usage = false) {
  if (s == LRT_OK) return;
  const std::string msg = std::string(lrt_status_name(s)) + ": " + lrt_last_error();
  if (usage || s == LRT_ERR_INVALID_ARGUMENT) throw UsageError(msg);
  throw RuntimeError(msg);
}

// Runtime failures from computations; invalid arguments there are still
// caught earlier by validation, so anything left is a runtime error.
void run_check(lrt_status s) {
  if (s == LRT_OK) return;
  throw RuntimeError(std::string(lrt_status_name(s)) + ": " + lrt_last_error());
}

struct ConfigDeleter {
  void operator()(lrt_config* c) const { lrt_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<lrt_config, ConfigDeleter>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { lrt_string_free(s); }
  std::string str() const { return s ? std::string(s) : std::string(); }
};

ConfigPtr make_config(const Options& o) {
  lrt_config* raw = nullptr;
  run_check(lrt_config_create(&raw));
  ConfigPtr c(raw);
  check(lrt_config_set_d(c.get(), o.d));
  check(lrt_config_set_alpha(c.get(), o.alpha));
  check(lrt_config_set_h0(c.get(), o.h0));
  check(lrt_config_set_n(c.get(), o.n));
  check(lrt_config_set_variant(c.get(), o.variant.c_str()));
  check(lrt_config_set_beta(c.get(), o.beta));
  check(lrt_config_set_epsilon(c.get(), o.epsilon));
  check(lrt_config_set_m(c.get(), o.m));
  check(lrt_config_set_seed(c.get(), o.seed));
  check(lrt_config_set_convention(c.get(), o.convention.c_str()));
  check(lrt_config_set_policy(c.get(), o.policy.c_str()));
  check(lrt_config_validate(c.get()));
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw RuntimeError("cannot open '" + o.out + "' for writing");
  f << text;
  if (!f.flush()) throw RuntimeError("write failed for '" + o.out + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_or(const Options& o, const char* fallback, std::initializer_list<const char*> allowed) {
  const std::string f = o.format.empty() ? fallback : o.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("unsupported --format '" + f + "' for this command");
}

void cmd_schedule(const Options& o) {
  auto cfg = make_config(o);
  lrt_schedule* raw = nullptr;
  run_check(lrt_schedule_build(cfg.get(), &raw));
  std::unique_ptr<lrt_schedule, void (*)(lrt_schedule*)> s(raw, lrt_schedule_destroy);
  if (format_or(o, "text", {"text", "json"}) == "json") {
    OwnedString js;
    run_check(lrt_schedule_to_json(s.get(), &js.s));
    emit(o, js.str());
    return;
  }
  std::size_t count = 0;
  run_check(lrt_schedule_step_count(s.get(), &count));
  std::ostringstream os;
  os << "step q phase sign duration coupling\n";
  for (std::size_t i = 0; i < count; ++i) {
    lrt_step_info st{};
    run_check(lrt_schedule_step(s.get(), i, &st));
    os << i << ' ' << st.q << ' ' << (st.collapse ? "collapse" : "expand") << ' ' << st.sign << ' '
       << fmt(st.duration) << ' ' << fmt(st.reference_coupling) << '\n';
  }
  double total = 0, closed = 0, bound = 0;
  run_check(lrt_schedule_total_runtime(s.get(), &total));
  run_check(lrt_schedule_closed_form(s.get(), &closed, &bound));
  os << "total_runtime " << fmt(total) << '\n' << "closed_form " << fmt(closed) << '\n';
  if (bound > 0) os << "paper_bound " << fmt(bound) << '\n';
  emit(o, os.str());
}

void cmd_run(const Options& o) {
  auto cfg = make_config(o);
  const bool json = format_or(o, "text", {"text", "json"}) == "json";
  if (o.m > 1) {
    if (json) {
      OwnedString js;
      run_check(lrt_run_multi_json(cfg.get(), o.trial, &js.s));
      emit(o, js.str());
      return;
    }
    std::vector<double> f(static_cast<std::size_t>(o.m));
    std::size_t count = 0;
    double aggregate = 0, runtime = 0;
    run_check(lrt_run_multi(cfg.get(), o.trial, f.data(), f.size(), &count, &aggregate, &runtime));
    std::ostringstream os;
    for (std::size_t i = 0; i < count; ++i) os << "fidelity[" << i << "] " << fmt(f[i]) << '\n';
    os << "aggregate " << fmt(aggregate) << '\n' << "runtime " << fmt(runtime) << '\n';
    emit(o, os.str());
    return;
  }
  if (json) {
    OwnedString js;
    run_check(lrt_run_single_json(cfg.get(), o.trial, o.step_errors ? 1 : 0, &js.s));
    emit(o, js.str());
    return;
  }
  lrt_trial_result r{};
  run_check(lrt_run_single(cfg.get(), o.trial, &r));
  emit(o, "p_final " + fmt(r.p_final) + "\nruntime " + fmt(r.runtime) + "\n");
}

int cmd_sweep(const Options& o) {
  if (o.values.empty()) throw UsageError("sweep needs --values");
  auto cfg = make_config(o);
  const std::string f = format_or(o, "csv", {"csv", "json"});
  lrt_sweep* raw = nullptr;
  const lrt_status s = lrt_sweep_run(cfg.get(), o.axis.c_str(), o.values.data(), o.values.size(), o.trials,
                                     o.threads, o.gamma, &raw);
  check(s, false);
  std::unique_ptr<lrt_sweep, void (*)(lrt_sweep*)> sweep(raw, lrt_sweep_destroy);
  OwnedString text;
  run_check(lrt_sweep_to_string(sweep.get(), f.c_str(), &text.s));
  emit(o, text.str());
  std::size_t failures = 0;
  run_check(lrt_sweep_failure_count(sweep.get(), &failures));
  for (std::size_t i = 0; i < failures; ++i) {
    OwnedString msg;
    run_check(lrt_sweep_failure_message(sweep.get(), i, &msg.s));
    std::cerr << "trial failed: " << msg.str() << '\n';
  }
  return failures == 0 ? 0 : 1;
}

void cmd_fit(const Options& o) {
  if (o.in.empty()) throw UsageError("fit needs --in");
  lrt_fit_result r{};
  const lrt_status s = lrt_fit_file(o.in.c_str(), &r);
  if (s == LRT_ERR_INVALID_ARGUMENT || s == LRT_ERR_IO) throw RuntimeError(std::string(lrt_last_error()));
  run_check(s);
  if (format_or(o, "text", {"text", "json"}) == "json") {
    nlohmann::json j = {{"a", r.a},
                        {"b", r.b},
                        {"stderr_a", r.stderr_a},
                        {"points_used", r.points_used},
                        {"r_squared", r.r_squared}};
    emit(o, j.dump(2) + "\n");
    return;
  }
  emit(o, "a " + fmt(r.a) + "\nb " + fmt(r.b) + "\nstderr_a " + fmt(r.stderr_a) + "\npoints_used " +
              std::to_string(r.points_used) + "\nr_squared " + fmt(r.r_squared) + "\n");
}

void cmd_tradeoff(const Options& o) {
  if (o.fidelities.empty()) throw UsageError("tradeoff needs --fidelity");
  if (o.betas.empty()) throw UsageError("tradeoff needs --betas");
  auto cfg = make_config(o);
  const std::string f = format_or(o, "csv", {"csv", "json"});
  lrt_tradeoff* raw = nullptr;
  run_check(lrt_tradeoff_run(cfg.get(), o.fidelities.data(), o.fidelities.size(), o.betas.data(), o.betas.size(),
                             o.trials, o.threads, &raw));
  std::unique_ptr<lrt_tradeoff, void (*)(lrt_tradeoff*)> t(raw, lrt_tradeoff_destroy);
  OwnedString text;
  run_check(lrt_tradeoff_to_string(t.get(), f.c_str(), &text.s));
  emit(o, text.str());
}

void cmd_bounds(const Options& o) {
  auto cfg = make_config(o);
  format_or(o, "json", {"json"});
  OwnedString js;
  check(lrt_bounds_json(cfg.get(), o.gamma, &js.s));
  emit(o, js.str());
}

void cmd_layout(const Options& o) {
  auto cfg = make_config(o);
  format_or(o, "json", {"json"});
  OwnedString js;
  run_check(lrt_layout_json(cfg.get(), &js.s));
  emit(o, js.str());
}

void add_protocol_flags(CLI::App* sub, Options& o) {
  sub->add_option("--d", o.d, "lattice dimension");
  sub->add_option("--alpha", o.alpha, "power-law exponent");
  sub->add_option("--h0", o.h0, "coupling scale");
  sub->add_option("--n", o.n, "number of levels");
  sub->add_option("--variant", o.variant, "nested | disjoint | physical");
  sub->add_option("--beta", o.beta, "gap prefactor");
  sub->add_option("--epsilon", o.epsilon, "relative coupling noise");
  sub->add_option("--m", o.m, "number of qubits");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--convention", o.convention, "corrected | paper");
  sub->add_option("--policy", o.policy, "per-step | static noise redraw");
  sub->add_option("--out", o.out, "output path (default stdout)");
  sub->add_option("--format", o.format, "output format");
  sub->add_option("--config", o.config, "JSON file with default flag values");
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw UsageError("config values must be scalars or arrays of scalars");
}

// Turns the keys of a --config file into flags that the command line did
// not already set.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  std::string command;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      const auto eq = a.find('=');
      const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
      given.insert(key);
      if (key == "config") path = eq == std::string::npos ? (i + 1 < args.size() ? args[i + 1] : "") : a.substr(eq + 1);
    } else if (command.empty() && (i == 0 || args[i - 1].rfind("--", 0) != 0)) {
      command = a;
    }
  }
  if (path.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(command);
  } catch (const CLI::OptionNotFound&) {
    throw UsageError("--config needs a subcommand");
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  std::vector<std::string> out = args;
  for (const auto& [key, v] : doc.items()) {
    if (given.count(key)) continue;
    if (sub->get_option_no_throw("--" + key) == nullptr)
      throw UsageError("config key '" + key + "' is not a flag of '" + command + "'");
    out.push_back("--" + key);
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) joined += (joined.empty() ? "" : ",") + json_scalar(x);
      out.push_back(joined);
    } else {
      out.push_back(json_scalar(v));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Simulate hierarchical state transfer on power-law interacting lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lrt_version()));

  auto* schedule = app.add_subcommand("schedule", "print the step schedule and closed-form runtimes");
  auto* run = app.add_subcommand("run", "simulate one trial");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one parameter");
  auto* fit = app.add_subcommand("fit", "power-law fit of a sweep file");
  auto* trade = app.add_subcommand("tradeoff", "repeat-until-success runtime over a beta grid");
  auto* bounds = app.add_subcommand("bounds", "analytic error bounds for a configuration");
  auto* layout = app.add_subcommand("layout", "dump site coordinates and level membership");

  for (auto* sub : {schedule, run, sweep, trade, bounds, layout}) add_protocol_flags(sub, o);
  run->add_option("--trial", o.trial, "trial index (selects the noise stream)");
  run->add_flag("--step-errors", o.step_errors, "record per-step propagator errors (json output)");
  for (auto* sub : {sweep, trade}) {
    sub->add_option("--trials", o.trials, "trials per point");
    sub->add_option("--threads", o.threads, "worker threads (default LRT_THREADS or all cores)");
  }
  sweep->add_option("--axis", o.axis, "n | epsilon | beta | m");
  sweep->add_option("--values", o.values, "axis values")->delimiter(',');
  sweep->add_option("--gamma", o.gamma, "confidence factor for the bound column");
  trade->add_option("--fidelity", o.fidelities, "target fidelities")->delimiter(',');
  trade->add_option("--betas", o.betas, "beta grid")->delimiter(',');
  bounds->add_option("--gamma", o.gamma, "confidence factor");
  fit->add_option("--in", o.in, "sweep CSV or JSON file")->required();
  fit->add_option("--out", o.out, "output path (default stdout)");
  fit->add_option("--format", o.format, "text | json");
  fit->add_option("--config", o.config, "JSON file with default flag values");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args, app);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << lrt_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*schedule) cmd_schedule(o);
    else if (*run) cmd_run(o);
    else if (*sweep) return cmd_sweep(o);
    else if (*fit) cmd_fit(o);
    else if (*trade) cmd_tradeoff(o);
    else if (*bounds) cmd_bounds(o);
    else if (*layout) cmd_layout(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
