#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lrt/config.hpp"
#include "lrt/dynamics.hpp"
#include "lrt/geometry.hpp"

namespace lrt {

// Identifies the random numbers of one protocol step of one trial.
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t step = 0;
  RedrawPolicy policy = RedrawPolicy::PerStep;
  // Strength used when the stream is handed to assemble_hamiltonian.
  double epsilon = 0;
};

// h_jk -> h_jk (1 + epsilon X_jk), X_jk ~ N(0, 1). PerStep draws are keyed
// by (seed, trial, step, entry); Static draws by (seed, trial, site pair).
StepHamiltonian gaussian_perturb(const StepHamiltonian& ideal, double epsilon, const NoiseStream& stream);

// V = H - H0 as a coupling block (same shape as the couplings).
Eigen::MatrixXd disorder(const StepHamiltonian& h, const StepHamiltonian& h0);

// h0 * dist(j, k)^-alpha for k in `to` (rows) and j in `from` (columns).
Eigen::MatrixXd physical_couplings(const SiteLayout& layout, const SiteList& from, const SiteList& to,
                                   double alpha, double h0 = 1.0);

struct ErrorSplit {
  double ideal = 0;
  Eigen::MatrixXd error;
};

// Ideal part ((3/4 + beta) 2^q)^-alpha, error part h - ideal.
ErrorSplit ideal_error_split(const Eigen::MatrixXd& h, int q, double alpha, double beta);

// 2^{-q alpha} (beta^-alpha - (3/4 + beta)^-alpha).
double h_q_max(int q, double alpha, double beta);

// sqrt(2) 2^{q-2} h_q_max.
double herr_norm_bound(int q, double alpha, double beta);

// Exact operator norm of the error block of level q in a gapped layout.
double realized_herr_norm(int q, double alpha, double beta);

enum class SumMode { Quadrature, Linear };

// gamma * epsilon * phi * 2^{d/2} [1 + (2^d - 1)^{-1/2}] 2^{-qd/2}.
double per_step_delta_bound(int q, double epsilon, double gamma, int d,
                            AngleConvention convention = AngleConvention::Corrected);

// Quadrature returns delta^2, Linear returns delta. range is R (= 2^n).
double delta_rand_bound(double epsilon, double gamma, int d, double range, SumMode mode,
                        AngleConvention convention = AngleConvention::Corrected);

// 2^{-A(d+1)+2} (1 - R^{-Ad}) / (1 - 2^{-Ad}), A = (gamma-1)^2 (1 + 2^{1-d} sqrt(2^d-1)) / 2.
double p_fail_bound(double gamma, int d, double range);

// Threshold gamma * epsilon * C (sqrt(a) + sqrt(b)) for ||V_q||.
double bai_yin_threshold(double epsilon, double coupling, std::size_t a, std::size_t b, double gamma);
// Upper bound on P(||V_q|| > threshold): 2 exp(-(gamma-1)^2 (sqrt(a)+sqrt(b))^2 / 2).
double bai_yin_violation_probability(std::size_t a, std::size_t b, double gamma);

struct BaiYinCheck {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double rate = 0;
  double threshold = 0;
  double predicted = 0;  // 2 exp(-t^2 / (2 sigma^2))
};

// Samples N1 x N2 Gaussian matrices with standard deviation sigma and counts
// ||M|| > sigma (sqrt(N1) + sqrt(N2)) + t.
BaiYinCheck bai_yin_check(std::size_t n1, std::size_t n2, double sigma, double t, std::size_t trials,
                          std::uint64_t seed = 0);

enum class LrMode { Exact, LargeBeta };

// Per-step (pi/4) [(1 + 3/(4 beta))^alpha - 1].
double delta_lr_step(double alpha, double beta);
// delta_LR^2. A log argument <= 1 clamps the result to 0.
double delta_lr_bound(double range, double beta, double alpha, LrMode mode);

struct BoundValue {
  double value = 0;
  bool vacuous = false;
};

struct BoundReport {
  double gamma = 1;
  double epsilon = 0;
  double range = 0;
  std::vector<double> per_step;  // delta_q bounds, q = 1..n
  BoundValue total_quadrature;   // delta^2
  BoundValue total_linear;       // delta
  BoundValue p_fail;
  // Filled for the physical variant.
  bool has_long_range = false;
  std::vector<double> h_q_max;
  std::vector<double> herr_bound;
  double delta_lr_per_step = 0;
  BoundValue delta_lr_exact;
  BoundValue delta_lr_large_beta;
};

BoundReport bound_report(const ProtocolConfig& cfg, double gamma);

}  // namespace lrt
