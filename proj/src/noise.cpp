#include "lrt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lrt/errors.hpp"
#include "lrt/rng.hpp"
#include "lrt/schedule.hpp"

namespace lrt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kPerStepDomain = 0x7065727374657031ULL;
constexpr std::uint64_t kStaticDomain = 0x7374617469633031ULL;
constexpr std::uint64_t kBaiYinDomain = 0x62616979696e3031ULL;

void require_beta(double beta) {
  if (!(beta > 0)) throw InvalidArgument("long-range error bounds need beta > 0 (they diverge at beta = 0)");
}

double shape_factor(int d) { return 1.0 + 1.0 / std::sqrt(std::exp2(d) - 1); }

}  // namespace

StepHamiltonian gaussian_perturb(const StepHamiltonian& ideal, double epsilon, const NoiseStream& stream) {
  if (!(epsilon >= 0)) throw InvalidArgument("epsilon must be >= 0");
  StepHamiltonian out = ideal;
  if (epsilon == 0) return out;
  const Eigen::Index rows = out.couplings.rows();
  const Eigen::Index cols = out.couplings.cols();
  if (stream.policy == RedrawPolicy::PerStep) {
    const std::uint64_t key = stream_key(stream.seed, stream.trial, stream.step, kPerStepDomain);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto counter = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(cols) + static_cast<std::uint64_t>(c);
        out.couplings(r, c) *= 1.0 + epsilon * normal_at(key, counter);
      }
  } else {
    const std::uint64_t key = stream_key(stream.seed, stream.trial, 0, kStaticDomain);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) {
        const std::uint64_t j = ideal.from[static_cast<std::size_t>(c)];
        const std::uint64_t k = ideal.to[static_cast<std::size_t>(r)];
        const std::uint64_t counter = (std::min(j, k) << 32) | std::max(j, k);
        out.couplings(r, c) *= 1.0 + epsilon * normal_at(key, counter);
      }
  }
  return out;
}

Eigen::MatrixXd disorder(const StepHamiltonian& h, const StepHamiltonian& h0) {
  if (h.from != h0.from || h.to != h0.to) throw InvalidArgument("disorder needs Hamiltonians on the same blocks");
  return h.couplings - h0.couplings;
}

Eigen::MatrixXd physical_couplings(const SiteLayout& layout, const SiteList& from, const SiteList& to, double alpha,
                                   double h0) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
  for (std::size_t c = 0; c < from.size(); ++c)
    for (std::size_t r = 0; r < to.size(); ++r) {
      const std::int64_t dist = pair_distance(layout, from[c], to[r]);
      if (dist == 0) throw InvalidArgument("coincident sites have no power-law coupling");
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          h0 * std::pow(static_cast<double>(dist), -alpha);
    }
  return out;
}

ErrorSplit ideal_error_split(const Eigen::MatrixXd& h, int q, double alpha, double beta) {
  if (q < 1) throw InvalidArgument("ideal_error_split needs q >= 1");
  ErrorSplit s;
  s.ideal = std::pow((0.75 + beta) * std::exp2(q), -alpha);
  s.error = h.array() - s.ideal;
  return s;
}

double h_q_max(int q, double alpha, double beta) {
  require_beta(beta);
  return std::exp2(-q * alpha) * (std::pow(beta, -alpha) - std::pow(0.75 + beta, -alpha));
}

double herr_norm_bound(int q, double alpha, double beta) {
  return std::sqrt(2.0) * std::exp2(q - 2) * h_q_max(q, alpha, beta);
}

double realized_herr_norm(int q, double alpha, double beta) {
  require_beta(beta);
  if (q < 1) throw InvalidArgument("realized_herr_norm needs q >= 1");
  const Geometry g = disjoint_layout(1, q, beta);
  const Eigen::MatrixXd h = physical_couplings(g.layout, g.blocks.levels[q - 1], g.blocks.levels[q], alpha);
  return operator_norm(ideal_error_split(h, q, alpha, beta).error);
}

double per_step_delta_bound(int q, double epsilon, double gamma, int d, AngleConvention convention) {
  return gamma * epsilon * angle_phi(d, convention) * std::exp2(0.5 * d) * shape_factor(d) * std::exp2(-0.5 * q * d);
}

double delta_rand_bound(double epsilon, double gamma, int d, double range, SumMode mode,
                        AngleConvention convention) {
  if (!(epsilon >= 0)) throw InvalidArgument("epsilon must be >= 0");
  if (!(range >= 1)) throw InvalidArgument("range must be >= 1");
  const double phi = angle_phi(d, convention);
  const double k = shape_factor(d);
  if (mode == SumMode::Quadrature) {
    return 2 * epsilon * epsilon * gamma * gamma * phi * phi * k * k * (1 - std::pow(range, -d)) /
           (1 - std::exp2(-d));
  }
  return 2 * epsilon * gamma * phi * k * (1 - std::pow(range, -0.5 * d)) / (1 - std::exp2(-0.5 * d));
}

double p_fail_bound(double gamma, int d, double range) {
  if (!(gamma > 1)) throw InvalidArgument("p_fail_bound needs gamma > 1");
  if (!(range >= 1)) throw InvalidArgument("range must be >= 1");
  const double a = 0.5 * (gamma - 1) * (gamma - 1) * (1 + std::exp2(1 - d) * std::sqrt(std::exp2(d) - 1));
  return std::exp2(-a * (d + 1) + 2) * (1 - std::pow(range, -a * d)) / (1 - std::exp2(-a * d));
}

double bai_yin_threshold(double epsilon, double coupling, std::size_t a, std::size_t b, double gamma) {
  return gamma * epsilon * coupling * (std::sqrt(static_cast<double>(a)) + std::sqrt(static_cast<double>(b)));
}

double bai_yin_violation_probability(std::size_t a, std::size_t b, double gamma) {
  const double s = std::sqrt(static_cast<double>(a)) + std::sqrt(static_cast<double>(b));
  return 2 * std::exp(-0.5 * (gamma - 1) * (gamma - 1) * s * s);
}

BaiYinCheck bai_yin_check(std::size_t n1, std::size_t n2, double sigma, double t, std::size_t trials,
                          std::uint64_t seed) {
  if (n2 < 1 || n1 < n2) throw InvalidArgument("bai_yin_check needs N1 >= N2 >= 1");
  if (trials < 1) throw InvalidArgument("bai_yin_check needs at least one trial");
  if (!(sigma > 0) || !(t >= 0)) throw InvalidArgument("bai_yin_check needs sigma > 0 and t >= 0");
  BaiYinCheck out;
  out.trials = trials;
  out.threshold = sigma * (std::sqrt(static_cast<double>(n1)) + std::sqrt(static_cast<double>(n2))) + t;
  out.predicted = 2 * std::exp(-0.5 * t * t / (sigma * sigma));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t key = stream_key(seed, i, 0, kBaiYinDomain);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        m(r, c) = sigma * normal_at(key, static_cast<std::uint64_t>(r * m.cols() + c));
    if (operator_norm(m) > out.threshold) ++out.violations;
  }
  out.rate = static_cast<double>(out.violations) / static_cast<double>(trials);
  return out;
}

double delta_lr_step(double alpha, double beta) {
  require_beta(beta);
  return 0.25 * kPi * (std::pow(1 + 0.75 / beta, alpha) - 1);
}

double delta_lr_bound(double range, double beta, double alpha, LrMode mode) {
  require_beta(beta);
  if (!(range >= 0)) throw InvalidArgument("range must be >= 0");
  if (mode == LrMode::Exact) {
    const double arg = range / (4 * beta + 3) + 1;
    if (arg <= 1) return 0;
    const double bracket = std::pow(1 + 0.75 / beta, alpha) - 1;
    return kPi * kPi / 8 * bracket * bracket * std::log2(arg);
  }
  const double arg = range / (4 * beta + 3);
  if (arg <= 1) return 0;
  return 9 * kPi * kPi / 128 * (alpha / beta) * (alpha / beta) * std::log2(arg);
}

BoundReport bound_report(const ProtocolConfig& cfg, double gamma) {
  cfg.validate_for_bounds();
  if (!(gamma >= 1)) throw InvalidArgument("gamma must be >= 1");
  const Geometry geom = build_geometry(cfg);
  BoundReport r;
  r.gamma = gamma;
  r.epsilon = cfg.epsilon;
  r.range = geom.blocks.range;
  const double nominal_range = std::exp2(cfg.n);
  for (int q = 1; q <= cfg.n; ++q)
    r.per_step.push_back(per_step_delta_bound(q, cfg.epsilon, gamma, cfg.d, cfg.convention));
  const double quad = delta_rand_bound(cfg.epsilon, gamma, cfg.d, nominal_range, SumMode::Quadrature, cfg.convention);
  const double lin = delta_rand_bound(cfg.epsilon, gamma, cfg.d, nominal_range, SumMode::Linear, cfg.convention);
  r.total_quadrature = {quad, quad > 1};
  r.total_linear = {lin, lin > 1};
  if (gamma > 1) {
    const double p = p_fail_bound(gamma, cfg.d, nominal_range);
    r.p_fail = {p, p > 1};
  } else {
    r.p_fail = {std::numeric_limits<double>::infinity(), true};
  }
  if (cfg.variant == Variant::DisjointPhysical) {
    r.has_long_range = true;
    for (int q = 1; q <= cfg.n; ++q) {
      r.h_q_max.push_back(h_q_max(q, cfg.alpha, cfg.beta));
      r.herr_bound.push_back(herr_norm_bound(q, cfg.alpha, cfg.beta));
    }
    r.delta_lr_per_step = delta_lr_step(cfg.alpha, cfg.beta);
    const double ex = delta_lr_bound(r.range, cfg.beta, cfg.alpha, LrMode::Exact);
    const double lb = delta_lr_bound(r.range, cfg.beta, cfg.alpha, LrMode::LargeBeta);
    r.delta_lr_exact = {ex, ex > 1};
    r.delta_lr_large_beta = {lb, lb > 1};
  }
  return r;
}

}  // namespace lrt
