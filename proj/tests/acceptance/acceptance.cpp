// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lrt/dynamics.hpp"
#include "lrt/geometry.hpp"
#include "lrt/harness.hpp"
#include "lrt/noise.hpp"
#include "lrt/rng.hpp"
#include "lrt/schedule.hpp"

using namespace lrt;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      if (pass) detail << " first failure: " << why << ';';
      pass = false;
    }
  }
};

int failures = 0;

template <class F>
void criterion(const char* name, F&& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %s (%.1fs)%s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ProtocolConfig nested(int d, int n) {
  ProtocolConfig c;
  c.d = d;
  c.n = n;
  return c;
}

ProtocolConfig physical(int n, double beta, double alpha = 1.0) {
  ProtocolConfig c;
  c.variant = Variant::DisjointPhysical;
  c.n = n;
  c.beta = beta;
  c.alpha = alpha;
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void ac1(Outcome& o) {
  double worst = 0;
  for (int n = 1; n <= 10; ++n) worst = std::max(worst, std::abs(1 - run_single(nested(1, n)).p_final));
  o.require(worst <= 1e-9, "d=1 deviation " + num(worst));
  double worst2 = 0;
  double paper_min = 1;
  for (int n = 1; n <= 4; ++n) {
    worst2 = std::max(worst2, std::abs(1 - run_single(nested(2, n)).p_final));
    auto c = nested(2, n);
    c.convention = AngleConvention::Paper;
    paper_min = std::min(paper_min, run_single(c).p_final);
  }
  o.require(worst2 <= 1e-8, "d=2 corrected deviation " + num(worst2));
  o.require(paper_min < 1 - 1e-6, "paper convention in d=2 reached p=" + num(paper_min));
  o.detail << " d1 max|1-p|=" << num(worst) << " d2 max|1-p|=" << num(worst2)
           << " d2 paper-convention min p=" << num(paper_min);
}

void ac2(Outcome& o) {
  double worst = 0;
  auto check = [&](double sim, double closed, const std::string& what) {
    const double r = rel(sim, closed);
    worst = std::max(worst, r);
    o.require(r <= 1e-12, what + " rel " + num(r));
  };
  for (int n = 1; n <= 10; ++n) {
    const auto c = nested(1, n);
    check(build_schedule(c, build_geometry(c)).total_runtime, kPi * n, "pi n at n=" + std::to_string(n));
  }
  for (double alpha : {0.5, 2.0})
    for (int n = 1; n <= 10; ++n) {
      auto c = nested(1, n);
      c.alpha = alpha;
      check(build_schedule(c, build_geometry(c)).total_runtime, tau_sp(1, alpha, n, c.convention),
            "geometric form alpha=" + num(alpha));
    }
  for (double beta : {0.5, 1.0, 2.0, 4.0})
    for (int n = 1; n <= 10; ++n) {
      const auto c = physical(n, beta);
      const auto g = build_geometry(c);
      const double r = g.blocks.range;
      const double closed = kPi * std::sqrt(2.0) * (0.75 + beta) * std::log2(r / (4 * beta + 3) + 1);
      check(build_schedule(c, g).total_runtime, closed, "tau_LR beta=" + num(beta));
    }
  o.detail << " max rel=" << num(worst);
}

void ac3(Outcome& o) {
  ProtocolConfig c;
  c.variant = Variant::DisjointIdeal;
  c.n = 6;
  c.beta = 1;
  const double single = run_single(c).runtime;
  double worst_f = 0;
  for (int m : {1, 2, 4, 8}) {
    c.m = m;
    const auto r = run_multi(c);
    for (double f : r.fidelities) worst_f = std::max(worst_f, std::abs(1 - f));
    const double ratio = r.runtime / single;
    o.require(ratio <= std::sqrt(2.0 * m) * 1.05, "m=" + std::to_string(m) + " ratio " + num(ratio));
    o.detail << " m=" << m << " ratio=" << num(ratio) << "/" << num(std::sqrt(2.0 * m));
  }
  o.require(worst_f <= 1e-9, "fidelity deviation " + num(worst_f));
  o.detail << " max|1-f|=" << num(worst_f);
}

std::vector<SweepRecord> plateau(double eps, std::size_t trials) {
  ExperimentPlan p;
  p.base = nested(1, 4);
  p.base.epsilon = eps;
  p.base.seed = 2024;
  p.trials = trials;
  for (int n = 4; n <= 10; ++n) p.values.push_back(n);
  return monte_carlo(p).records;
}

void ac4(Outcome& o) {
  const std::vector<double> eps = {0.3, 0.6, 0.9};
  std::vector<std::vector<SweepRecord>> curves;
  for (double e : eps) curves.push_back(plateau(e, 100));
  for (std::size_t k = 0; k < curves[0].size(); ++k)
    for (std::size_t e = 0; e + 1 < eps.size(); ++e)
      o.require(curves[e][k].mean_p_final > curves[e + 1][k].mean_p_final,
                "order at R=" + num(curves[e][k].value));
  for (std::size_t e = 0; e < eps.size(); ++e) {
    const auto& c = curves[e];
    for (std::size_t k = 0; k + 2 < c.size(); ++k) {
      const double d0 = c[k + 1].mean_p_final - c[k].mean_p_final;
      const double d1 = c[k + 2].mean_p_final - c[k + 1].mean_p_final;
      auto v = [&](std::size_t i) { return c[i].std_error * c[i].std_error; };
      const double sigma = std::sqrt(v(k) + 2 * v(k + 1) + v(k + 2));
      o.require(std::abs(d1) <= std::abs(d0) + 3 * sigma,
                "difference grew at eps=" + num(eps[e]) + " R=" + num(c[k + 2].value));
    }
    o.detail << " eps=" << num(eps[e]) << " p(R=16)=" << num(c.front().mean_p_final)
             << " p(R=1024)=" << num(c.back().mean_p_final);
  }
  const double floor = 1 - 0.01 * kPi * kPi;
  double low = 1;
  for (const auto& r : plateau(0.1, 100)) low = std::min(low, r.mean_p_final);
  o.require(low >= floor, "eps=0.1 mean " + num(low) + " below " + num(floor));
  o.detail << " eps=0.1 min mean=" << num(low);
}

void ac5(Outcome& o) {
  const double gamma = 1.5;
  std::size_t within = 0;
  double predicted = 0;
  double worst_slack = -1;
  const std::size_t steps = 50;
  for (std::size_t i = 0; i < steps; ++i) {
    // Draw a level, noise strength and stream from a fixed counter stream.
    const std::uint64_t key = stream_key(77, i, 0, 0x5eedULL);
    const int q = 1 + static_cast<int>(uniform_at(key, 0) * 8);
    const double eps = 0.05 + 0.9 * uniform_at(key, 1);
    auto c = nested(1, std::max(q, 1));
    c.epsilon = eps;
    c.seed = i;
    const auto g = build_geometry(c);
    const auto s = build_schedule(c, g);
    const StepSpec& step = s.steps[static_cast<std::size_t>(q - 1)];
    const auto h0 = assemble_hamiltonian(step, g);
    NoiseStream ns{c.seed, i, static_cast<std::uint64_t>(q - 1), c.redraw, eps};
    const auto h = gaussian_perturb(h0, eps, ns);
    const Eigen::MatrixXd v = disorder(h, h0);
    const double vnorm = operator_norm(v);
    const double delta = step_error(h, h0, step.duration);
    worst_slack = std::max(worst_slack, delta - vnorm * step.duration);
    o.require(delta <= vnorm * step.duration + 1e-12, "Duhamel bound at step " + std::to_string(i));
    const auto a = static_cast<std::size_t>(h0.couplings.cols());
    const auto b = static_cast<std::size_t>(h0.couplings.rows());
    if (vnorm <= bai_yin_threshold(eps, step.reference_coupling, a, b, gamma)) ++within;
    predicted += 1 - std::min(1.0, bai_yin_violation_probability(a, b, gamma));
  }
  const double expected = predicted / steps;
  const double se = std::sqrt(std::max(expected * (1 - expected), 0.0) / steps);
  const double rate = static_cast<double>(within) / steps;
  o.require(rate >= expected - 3 * se, "Bai-Yin rate " + num(rate) + " < " + num(expected - 3 * se));
  o.detail << " max(delta - |V|t)=" << num(worst_slack) << " Bai-Yin within=" << within << "/" << steps
           << " predicted>=" << num(expected);
}

void ac6(Outcome& o) {
  double worst = 0;
  for (double beta : {1.0, 2.0, 4.0})
    for (int q = 1; q <= 8; ++q) {
      const double real = realized_herr_norm(q, 1.0, beta);
      const double bound = herr_norm_bound(q, 1.0, beta);
      worst = std::max(worst, real / bound);
      o.require(real <= bound, "herr q=" + std::to_string(q) + " beta=" + num(beta));
    }
  for (double beta : {4.0, 8.0, 16.0})
    for (int n = 1; n <= 20; ++n) {
      const double r = (4 * beta + 3) * (std::exp2(n) - 1);
      o.require(delta_lr_bound(r, beta, 1.0, LrMode::Exact) >= delta_lr_bound(r, beta, 1.0, LrMode::LargeBeta),
                "delta_LR ordering beta=" + num(beta));
    }
  o.detail << " max realized/bound=" << num(worst);
}

void ac7(Outcome& o) {
  std::vector<double> slopes;
  for (double beta : {1.0, 2.0, 4.0}) {
    ExperimentPlan p;
    p.base = physical(4, beta);
    p.trials = 1;
    for (int n = 4; n <= 11; ++n) p.values.push_back(n);
    const auto fit = fit_power_law(monte_carlo(p).records);
    o.require(fit.r_squared >= 0.98, "R^2 " + num(fit.r_squared) + " at beta=" + num(beta));
    if (!slopes.empty()) o.require(fit.a < slopes.back(), "a not decreasing at beta=" + num(beta));
    slopes.push_back(fit.a);
    o.detail << " beta=" << num(beta) << " a=" << num(fit.a) << " R2=" << num(fit.r_squared);
  }
}

void ac8(Outcome& o) {
  const std::vector<double> betas = {0.5, 1, 1.5, 2, 3, 4, 6, 8, 12, 16};
  const std::vector<double> fids = {0.5, 0.9, 0.99};
  const auto curves = tradeoff(fids, betas, physical(8, 1.0), 1);
  const auto& top = curves.back();
  o.require(top.argmin_beta > betas.front() && top.argmin_beta < betas.back(),
            "minimum at the grid edge beta=" + num(top.argmin_beta));
  for (std::size_t i = 0; i + 1 < curves.size(); ++i)
    o.require(curves[i + 1].min_tau_star >= curves[i].min_tau_star, "min tau* decreased in F");
  for (const auto& c : curves)
    o.detail << " F=" << num(c.fidelity) << " argmin=" << num(c.argmin_beta) << " tau*=" << num(c.min_tau_star);
}

void ac9(Outcome& o) {
  ExperimentPlan p;
  p.base = nested(1, 3);
  p.base.epsilon = 0.4;
  p.base.seed = 99;
  p.trials = 24;
  p.values = {3, 4, 5, 6};
  p.threads = 1;
  const auto a = records_to_csv(monte_carlo(p).records);
  p.threads = 4;
  const auto b = records_to_csv(monte_carlo(p).records);
  const auto c = records_to_csv(monte_carlo(p).records);
  o.require(a == b, "thread count changed the CSV");
  o.require(b == c, "repeated run changed the CSV");
  p.base.redraw = RedrawPolicy::Static;
  p.threads = 1;
  const auto d = records_to_csv(monte_carlo(p).records);
  p.threads = 3;
  o.require(d == records_to_csv(monte_carlo(p).records), "static policy differs across threads");
}

}  // namespace

int main() {
  criterion("AC1 perfect ideal transfer", ac1);
  criterion("AC2 runtime closed forms", ac2);
  criterion("AC3 multi-qubit fidelity and runtime", ac3);
  criterion("AC4 noise plateau", ac4);
  criterion("AC5 per-step error bounds", ac5);
  criterion("AC6 long-range error bound", ac6);
  criterion("AC7 power-law decay", ac7);
  criterion("AC8 repeat-until-success tradeoff", ac8);
  criterion("AC9 determinism", ac9);
  return failures == 0 ? 0 : 1;
}
