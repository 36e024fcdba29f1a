#include "lrt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lrt/dynamics.hpp"
#include "lrt/errors.hpp"
#include "lrt/geometry.hpp"
#include "lrt/noise.hpp"
#include "lrt/schedule.hpp"

namespace lrt {

namespace {

using nlohmann::json;

// Calls fn(i) for i in [0, count) on up to `threads` workers. Results go to
// per-index slots owned by the caller, so scheduling order never matters.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int integer_value(double v, const char* what) {
  if (v != std::floor(v) || v < 0 || v > std::numeric_limits<int>::max())
    throw InvalidArgument(std::string(what) + " must be a nonnegative integer, got " + fmt17(v));
  return static_cast<int>(v);
}

// Predicted fidelity floor for a point, where an analytic bound applies.
std::optional<double> point_bound(const ProtocolConfig& cfg, const Geometry& geom, double gamma) {
  if (cfg.variant == Variant::NestedIdeal && cfg.epsilon > 0)
    return 1 - delta_rand_bound(cfg.epsilon, gamma, cfg.d, std::exp2(cfg.n), SumMode::Quadrature, cfg.convention);
  if (cfg.variant == Variant::DisjointPhysical && cfg.beta > 0)
    return 1 - delta_lr_bound(geom.blocks.range, cfg.beta, cfg.alpha, LrMode::Exact);
  return std::nullopt;
}

struct Point {
  ProtocolConfig cfg;
  Geometry geom;
  Schedule sched;
  double value = 0;
};

Point make_point(const ProtocolConfig& cfg, double value) {
  Point p;
  p.cfg = cfg;
  p.cfg.validate();
  p.geom = build_geometry(p.cfg);
  p.sched = build_schedule(p.cfg, p.geom);
  p.value = value;
  return p;
}

double run_trial(const Point& p, std::size_t trial) {
  if (p.cfg.m > 1) return run_multi(p.cfg, p.geom, p.sched, trial).aggregate;
  TrialOptions opts;
  opts.record_uniformity = false;
  return run_single(p.cfg, p.geom, p.sched, trial, opts).p_final;
}

struct TrialOutcome {
  double p = 0;
  bool ok = false;
  std::string message;
};

std::vector<TrialOutcome> run_points(const std::vector<Point>& points, std::size_t trials, unsigned threads) {
  std::vector<TrialOutcome> out(points.size() * trials);
  parallel_for(out.size(), threads, [&](std::size_t i) {
    try {
      out[i].p = run_trial(points[i / trials], i % trials);
      out[i].ok = true;
    } catch (const std::exception& e) {
      out[i].message = e.what();
    }
  });
  return out;
}

struct Moments {
  double mean = 0;
  double std_error = 0;
  std::size_t count = 0;
};

Moments moments(const std::vector<TrialOutcome>& outcomes, std::size_t begin, std::size_t end) {
  Moments m;
  double sum = 0;
  for (std::size_t i = begin; i < end; ++i)
    if (outcomes[i].ok) {
      sum += outcomes[i].p;
      ++m.count;
    }
  if (m.count == 0) return m;
  m.mean = sum / static_cast<double>(m.count);
  if (m.count > 1) {
    double ss = 0;
    for (std::size_t i = begin; i < end; ++i)
      if (outcomes[i].ok) ss += (outcomes[i].p - m.mean) * (outcomes[i].p - m.mean);
    m.std_error = std::sqrt(ss / static_cast<double>(m.count - 1) / static_cast<double>(m.count));
  }
  return m;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw InvalidArgument("line " + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Levels: return "R";
    case SweepAxis::Epsilon: return "epsilon";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::Qubits: return "m";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view s) {
  if (s == "R" || s == "levels" || s == "n") return SweepAxis::Levels;
  if (s == "epsilon") return SweepAxis::Epsilon;
  if (s == "beta") return SweepAxis::Beta;
  if (s == "m" || s == "qubits") return SweepAxis::Qubits;
  throw InvalidArgument("unknown sweep axis '" + std::string(s) + "' (expected n, epsilon, beta or m)");
}

void ExperimentPlan::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (values.empty()) throw InvalidArgument("sweep needs at least one axis value");
  if (!(gamma >= 1)) throw InvalidArgument("gamma must be >= 1");
  base.validate();
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("LRT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ProtocolConfig point_config(const ProtocolConfig& base, SweepAxis axis, double value) {
  ProtocolConfig cfg = base;
  switch (axis) {
    case SweepAxis::Levels: cfg.n = integer_value(value, "n"); break;
    case SweepAxis::Epsilon: cfg.epsilon = value; break;
    case SweepAxis::Beta: cfg.beta = value; break;
    case SweepAxis::Qubits: cfg.m = integer_value(value, "m"); break;
  }
  cfg.validate();
  return cfg;
}

SweepResult monte_carlo(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<Point> points;
  points.reserve(plan.values.size());
  for (double v : plan.values) {
    Point p = make_point(point_config(plan.base, plan.axis, v), v);
    if (plan.axis == SweepAxis::Levels) p.value = p.geom.blocks.range;
    points.push_back(std::move(p));
  }
  const auto outcomes = run_points(points, plan.trials, plan.threads);

  SweepResult result;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const std::size_t begin = k * plan.trials;
    for (std::size_t t = 0; t < plan.trials; ++t)
      if (!outcomes[begin + t].ok) result.failures.push_back({points[k].value, t, outcomes[begin + t].message});
    const Moments m = moments(outcomes, begin, begin + plan.trials);
    SweepRecord r;
    r.axis = plan.axis;
    r.value = points[k].value;
    r.mean_p_final = m.mean;
    r.std_error = m.std_error;
    r.trials = m.count;
    r.runtime_total = points[k].sched.total_runtime;
    r.bound = point_bound(points[k].cfg, points[k].geom, plan.gamma);
    result.records.push_back(r);
  }
  return result;
}

FitResult fit_power_law(const std::vector<double>& range, const std::vector<double>& p) {
  if (range.size() != p.size()) throw InvalidArgument("fit needs matching range and probability lists");
  if (range.size() < 3) throw InvalidArgument("fit needs at least 3 points, got " + std::to_string(range.size()));
  const std::size_t n = range.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p[i] > 0)) throw InvalidArgument("fit needs positive probabilities, got " + fmt17(p[i]));
    if (!(range[i] > 0)) throw InvalidArgument("fit needs positive ranges, got " + fmt17(range[i]));
    x[i] = std::log(range[i]);
    y[i] = std::log(p[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0)) throw InvalidArgument("fit needs at least two distinct ranges");
  const double slope = sxy / sxx;
  FitResult f;
  f.a = -slope;
  f.b = my - slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.b + slope * x[i]);
    ssr += e * e;
  }
  f.stderr_a = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  f.points_used = n;
  f.r_squared = syy > 0 ? 1 - ssr / syy : 1.0;
  return f;
}

FitResult fit_power_law(const std::vector<SweepRecord>& records) {
  std::vector<double> r, p;
  for (const auto& rec : records) {
    r.push_back(rec.value);
    p.push_back(rec.mean_p_final);
  }
  return fit_power_law(r, p);
}

std::size_t repeat_count(double p, double fidelity) {
  if (!(p > 0) || p > 1) throw InvalidArgument("repeat_count needs 0 < p <= 1 (target unreachable at p = 0)");
  if (!(fidelity >= 0) || !(fidelity < 1)) throw InvalidArgument("repeat_count needs 0 <= F < 1");
  if (p == 1) return 1;
  // 1 - (1-p)^s > F  <=>  s log(1-p) < log(1-F)
  const double lq = std::log1p(-p);
  const double lf = std::log1p(-fidelity);
  auto reached = [&](double s) { return s * lq < lf; };
  double s = std::max(1.0, std::floor(lf / lq));
  while (s > 1 && reached(s - 1)) s -= 1;
  while (!reached(s)) s += 1;
  return static_cast<std::size_t>(s);
}

std::vector<TradeoffCurve> tradeoff(const std::vector<double>& fidelities, const std::vector<double>& betas,
                                    const ProtocolConfig& cfg, std::size_t trials, unsigned threads) {
  if (fidelities.empty() || betas.empty()) throw InvalidArgument("tradeoff needs fidelities and betas");
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (cfg.variant != Variant::DisjointPhysical) throw InvalidArgument("tradeoff needs the physical variant");
  std::vector<Point> points;
  for (double b : betas) {
    if (!(b > 0)) throw InvalidArgument("tradeoff needs beta > 0, got " + fmt17(b));
    ProtocolConfig c = cfg;
    c.beta = b;
    points.push_back(make_point(c, b));
  }
  const auto outcomes = run_points(points, trials, threads);
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (!outcomes[i].ok) throw NumericalError("tradeoff trial failed: " + outcomes[i].message);

  std::vector<TradeoffCurve> curves;
  for (double f : fidelities) {
    TradeoffCurve curve;
    curve.fidelity = f;
    curve.min_tau_star = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k) {
      TradeoffRow row;
      row.beta = points[k].value;
      row.p_x = moments(outcomes, k * trials, (k + 1) * trials).mean;
      row.range = points[k].geom.blocks.range;
      row.tau_lr = points[k].sched.total_runtime;
      row.reachable = row.p_x > 0;
      if (row.reachable) {
        row.ell = repeat_count(std::min(row.p_x, 1.0), f);
        row.tau_eff = static_cast<double>(row.ell) * row.tau_lr;
        row.tau_star = row.tau_eff / tau_lr(cfg.alpha, 0.0, row.range, cfg.h0);
        if (row.tau_star < curve.min_tau_star) {
          curve.min_tau_star = row.tau_star;
          curve.argmin_beta = row.beta;
        }
      }
      curve.rows.push_back(row);
    }
    if (!std::isfinite(curve.min_tau_star))
      throw InvalidArgument("target fidelity " + fmt17(f) + " is unreachable at every beta");
    curves.push_back(std::move(curve));
  }
  return curves;
}

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InvalidArgument("unknown format '" + std::string(s) + "' (expected csv or json)");
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = "axis,value,mean_p_final,stderr,trials,runtime_total,bound\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.axis)) + ',' + fmt17(r.value) + ',' + fmt17(r.mean_p_final) + ',' +
           fmt17(r.std_error) + ',' + std::to_string(r.trials) + ',' + fmt17(r.runtime_total) + ',' +
           (r.bound ? fmt17(*r.bound) : std::string()) + '\n';
  }
  return out;
}

std::string records_to_json(const std::vector<SweepRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back({{"axis", std::string(to_string(r.axis))},
                   {"value", r.value},
                   {"mean_p_final", r.mean_p_final},
                   {"stderr", r.std_error},
                   {"trials", r.trials},
                   {"runtime_total", r.runtime_total},
                   {"bound", optional_number(r.bound)}});
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepRecord> records_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("axis,value,mean_p_final", 0) != 0)
    throw InvalidArgument("CSV does not start with the sweep header");
  std::vector<SweepRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7)
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected 7 columns, got " +
                            std::to_string(cells.size()));
    SweepRecord r;
    r.axis = parse_axis(cells[0]);
    r.value = parse_double(cells[1], lineno);
    r.mean_p_final = parse_double(cells[2], lineno);
    r.std_error = parse_double(cells[3], lineno);
    r.trials = static_cast<std::size_t>(parse_double(cells[4], lineno));
    r.runtime_total = parse_double(cells[5], lineno);
    if (!cells[6].empty()) r.bound = parse_double(cells[6], lineno);
    out.push_back(r);
  }
  return out;
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("records")) doc = doc["records"];
  if (!doc.is_array()) throw InvalidArgument("expected a JSON array of records");
  std::vector<SweepRecord> out;
  try {
    for (const auto& j : doc) {
      SweepRecord r;
      r.axis = parse_axis(j.at("axis").get<std::string>());
      r.value = j.at("value").get<double>();
      r.mean_p_final = j.at("mean_p_final").get<double>();
      r.std_error = j.at("stderr").get<double>();
      r.trials = j.at("trials").get<std::size_t>();
      r.runtime_total = j.at("runtime_total").get<double>();
      if (j.contains("bound") && !j["bound"].is_null()) r.bound = j["bound"].get<double>();
      out.push_back(r);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed record: ") + e.what());
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_records(const std::vector<SweepRecord>& records, OutputFormat format, const std::string& path) {
  write_text_file(path, format == OutputFormat::Csv ? records_to_csv(records) : records_to_json(records));
}

std::vector<SweepRecord> read_records(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) return records_from_json(text);
  return records_from_csv(text);
}

std::string tradeoff_to_csv(const std::vector<TradeoffCurve>& curves) {
  std::string out = "fidelity,beta,p_x,ell,tau_lr,tau_eff,tau_star,range,argmin_beta\n";
  for (const auto& c : curves)
    for (const auto& r : c.rows) {
      out += fmt17(c.fidelity) + ',' + fmt17(r.beta) + ',' + fmt17(r.p_x) + ',' +
             (r.reachable ? std::to_string(r.ell) : std::string()) + ',' + fmt17(r.tau_lr) + ',' +
             (r.reachable ? fmt17(r.tau_eff) : std::string()) + ',' +
             (r.reachable ? fmt17(r.tau_star) : std::string()) + ',' + fmt17(r.range) + ',' +
             fmt17(c.argmin_beta) + '\n';
    }
  return out;
}

std::string tradeoff_to_json(const std::vector<TradeoffCurve>& curves) {
  json arr = json::array();
  for (const auto& c : curves) {
    json rows = json::array();
    for (const auto& r : c.rows) {
      rows.push_back({{"beta", r.beta},
                      {"p_x", r.p_x},
                      {"ell", r.reachable ? json(r.ell) : json(nullptr)},
                      {"tau_lr", r.tau_lr},
                      {"tau_eff", r.reachable ? json(r.tau_eff) : json(nullptr)},
                      {"tau_star", r.reachable ? json(r.tau_star) : json(nullptr)},
                      {"range", r.range}});
    }
    arr.push_back({{"fidelity", c.fidelity},
                   {"argmin_beta", c.argmin_beta},
                   {"min_tau_star", c.min_tau_star},
                   {"rows", rows}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace lrt
