#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrt/config.hpp"

namespace lrt {

// What a sweep varies. Levels sweeps take n as input and report the range R
// of the built geometry as the record value.
enum class SweepAxis { Levels, Epsilon, Beta, Qubits };

std::string_view to_string(SweepAxis axis);  // "R", "epsilon", "beta", "m"
SweepAxis parse_axis(std::string_view s);    // also accepts "levels" and "n"

struct ExperimentPlan {
  ProtocolConfig base;
  SweepAxis axis = SweepAxis::Levels;
  std::vector<double> values;
  std::size_t trials = 1;
  unsigned threads = 0;  // 0: LRT_THREADS, else hardware concurrency
  double gamma = 1.0;    // used for the bound column

  void validate() const;
};

struct SweepRecord {
  SweepAxis axis = SweepAxis::Levels;
  double value = 0;
  double mean_p_final = 0;
  double std_error = 0;  // unbiased sample standard deviation / sqrt(trials)
  std::size_t trials = 0;
  double runtime_total = 0;
  std::optional<double> bound;  // predicted fidelity floor 1 - delta^2
};

struct TrialFailure {
  double value = 0;
  std::size_t trial = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  // Trials whose propagation failed. They are excluded from the means and
  // the record's trial count.
  std::vector<TrialFailure> failures;
};

unsigned default_thread_count();

// Runs plan.trials trials at every axis value. Trial t of every point uses
// noise keyed by (seed, t), so output does not depend on thread count.
SweepResult monte_carlo(const ExperimentPlan& plan);

// Configuration of one axis point.
ProtocolConfig point_config(const ProtocolConfig& base, SweepAxis axis, double value);

struct FitResult {
  double a = 0;  // decay exponent, P ~ R^-a
  double b = 0;  // intercept of log P
  double stderr_a = 0;
  std::size_t points_used = 0;
  double r_squared = 0;
};

// Least squares of log(mean_p_final) against log(value).
FitResult fit_power_law(const std::vector<SweepRecord>& records);
FitResult fit_power_law(const std::vector<double>& range, const std::vector<double>& p);

// Smallest s with 1 - (1 - p)^s > F.
std::size_t repeat_count(double p, double fidelity);

struct TradeoffRow {
  double beta = 0;
  double p_x = 0;
  std::size_t ell = 0;  // 0 when the target cannot be reached (p_x = 0)
  double tau_lr = 0;
  double tau_eff = 0;
  double tau_star = 0;
  double range = 0;
  bool reachable = true;
};

struct TradeoffCurve {
  double fidelity = 0;
  std::vector<TradeoffRow> rows;
  double argmin_beta = 0;
  double min_tau_star = 0;
};

// One curve per target fidelity. Every beta is simulated once (cfg.n
// levels, DisjointPhysical) and shared between the curves.
std::vector<TradeoffCurve> tradeoff(const std::vector<double>& fidelities, const std::vector<double>& betas,
                                    const ProtocolConfig& cfg, std::size_t trials = 1, unsigned threads = 0);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(std::string_view s);

std::string records_to_csv(const std::vector<SweepRecord>& records);
std::string records_to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_csv(const std::string& text);
std::vector<SweepRecord> records_from_json(const std::string& text);

void write_records(const std::vector<SweepRecord>& records, OutputFormat format, const std::string& path);
// Format chosen by content: JSON if the first non-space character is '[' or '{'.
std::vector<SweepRecord> read_records(const std::string& path);

std::string tradeoff_to_csv(const std::vector<TradeoffCurve>& curves);
std::string tradeoff_to_json(const std::vector<TradeoffCurve>& curves);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lrt
