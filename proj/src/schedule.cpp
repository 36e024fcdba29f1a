#include "lrt/schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lrt/errors.hpp"
#include "lrt/ortho.hpp"

namespace lrt {

namespace {

constexpr double kPi = std::numbers::pi;

// (2^{n x} - 1) / (2^x - 1), continuous through x = 0 where it equals n.
double geometric_ratio(double x, double n) {
  if (x == 0) return n;
  return std::expm1(n * x * std::numbers::ln2) / std::expm1(x * std::numbers::ln2);
}

int log2_block(std::size_t w) {
  int k = 0;
  while ((std::size_t{1} << k) < w) ++k;
  return k;
}

void require_positive_h0(double h0) {
  if (!(h0 > 0)) throw InvalidArgument("h0 must be > 0");
}

}  // namespace

double ideal_coupling(int q, double alpha, double h0) {
  if (q < 1) throw InvalidArgument("ideal_coupling needs q >= 1");
  return std::exp2(-q * alpha) * h0;
}

double lr_center_coupling(int q, double alpha, double beta) {
  if (q < 1) throw InvalidArgument("lr_center_coupling needs q >= 1");
  const double bracket = std::ceil(std::exp2(q - 2)) + beta * std::exp2(q) + std::exp2(q - 1);
  return std::pow(bracket, -alpha);
}

double angle_phi(int d, AngleConvention convention) {
  if (d < 1) throw InvalidArgument("angle_phi needs d >= 1");
  const double ratio = std::exp2(d) - 1;
  return convention == AngleConvention::Paper ? std::atan(ratio) : std::atan(std::sqrt(ratio));
}

double step_duration_ideal(int q, const ProtocolConfig& cfg, AngleConvention convention) {
  if (cfg.variant != Variant::NestedIdeal)
    throw InvalidArgument("step_duration_ideal applies to the nested variant");
  const double inner = std::exp2((q - 1) * cfg.d);
  const double shell = std::exp2(q * cfg.d) - inner;
  return angle_phi(cfg.d, convention) / (ideal_coupling(q, cfg.alpha, cfg.h0) * std::sqrt(inner * shell));
}

double step_duration_pi_half(double coupling, double size_a, double size_b) {
  if (!(coupling > 0)) throw InvalidArgument("step_duration_pi_half needs a positive coupling");
  if (!(size_a > 0) || !(size_b > 0)) throw InvalidArgument("block sizes must be positive");
  return kPi / (2 * coupling * std::sqrt(size_a * size_b));
}

double mp_coupling(double coupling, std::size_t block, int d) {
  if (d < 1) throw InvalidArgument("mp_coupling needs d >= 1");
  const std::size_t base = std::size_t{1} << d;
  std::size_t p = 1;
  while (p < block) p *= base;
  if (block < 1 || p != block) throw InvalidArgument("block size must be a power of 2^d");
  return coupling / std::sqrt(static_cast<double>(block));
}

double tau_sp(int d, double alpha, int n, AngleConvention convention, double h0) {
  require_positive_h0(h0);
  const double phi = angle_phi(d, convention);
  const double pre = std::exp2(d + 1) * phi / std::sqrt(std::exp2(d) - 1);
  const double x = alpha - d;
  return pre * std::exp2(x) * geometric_ratio(x, n) / h0;
}

double tau_lr(double alpha, double beta, double range, double h0) {
  require_positive_h0(h0);
  if (!(beta >= 0)) throw InvalidArgument("tau_lr needs beta >= 0");
  const double levels = std::log2(range / (4 * beta + 3) + 1);
  const double x = alpha - 1;
  return kPi * std::sqrt(2.0) * std::exp2(x) * std::pow(0.75 + beta, alpha) * geometric_ratio(x, levels) / h0;
}

double tau_mp(double alpha, double beta, int n, std::size_t block, double h0) {
  require_positive_h0(h0);
  const int w = log2_block(block);
  const double x = alpha - 1;
  // sum_{q=w+1}^{n} 2^{q x}
  const double sum = std::exp2((w + 1) * x) * geometric_ratio(x, n - w);
  return std::sqrt(static_cast<double>(block)) * kPi * std::sqrt(2.0) * std::pow(0.75 + beta, alpha) * sum / h0;
}

double tau_mp_bound(int d, double alpha, std::size_t m, int n, double h0) {
  require_positive_h0(h0);
  const std::size_t block = block_size(m, d);
  const int w = log2_block(block) / d;
  const double x = alpha - d;
  const double sum = std::exp2(w * x) * geometric_ratio(x, n - w + 1);
  return std::exp2(1.5 * d) * kPi / std::sqrt(std::exp2(d) - 1) * std::pow(1.5, alpha) *
         std::sqrt(static_cast<double>(m)) * sum / h0;
}

double emission_fidelity(double tau, double gamma) {
  if (!(tau >= 0) || !(gamma >= 0)) throw InvalidArgument("emission_fidelity needs tau, gamma >= 0");
  return std::exp(-gamma * tau);
}

Schedule build_schedule(const ProtocolConfig& cfg, const Geometry& geom) {
  cfg.validate();
  const auto& blocks = geom.blocks;
  if (blocks.n != cfg.n) throw InvalidArgument("geometry was built for a different n");

  Schedule s;
  std::vector<StepSpec> expand;

  if (cfg.variant == Variant::NestedIdeal) {
    if (blocks.kind != HierarchyKind::Nested) throw InvalidArgument("nested variant needs a nested hierarchy");
    for (int q = 1; q <= cfg.n; ++q) {
      StepSpec st;
      st.q = q;
      st.reference_coupling = ideal_coupling(q, cfg.alpha, cfg.h0);
      st.rule = IdealUniform{st.reference_coupling};
      st.duration = step_duration_ideal(q, cfg, cfg.convention);
      expand.push_back(st);
    }
  } else {
    if (blocks.kind != HierarchyKind::Disjoint) throw InvalidArgument("disjoint variants need a gapped layout");
    const std::size_t w = block_size(static_cast<std::size_t>(cfg.m), cfg.d);
    if (cfg.m > 1 && blocks.first_level != log2_block(w))
      throw InvalidArgument("layout does not start at the multi-qubit block level");
    for (int q = blocks.first_level + 1; q <= cfg.n; ++q) {
      const auto& a = blocks.levels[q - 1];
      const auto& b = blocks.levels[q];
      const double dist = center_distance(geom.layout, a, b);
      const double c = cfg.h0 * std::pow(dist, -cfg.alpha);
      const double na = static_cast<double>(a.size());
      const double nb = static_cast<double>(b.size());
      StepSpec st;
      st.q = q;
      st.reference_coupling = c;
      if (cfg.m > 1) {
        MultiParticle mp;
        mp.block = w;
        mp.pair_coupling = c;
        mp.source_blocks = a.size() / w;
        mp.k_coupling = mp_coupling(c * std::sqrt(na * nb), w, cfg.d);
        st.rule = mp;
        st.duration = kPi / (2 * mp.k_coupling);
      } else {
        if (cfg.variant == Variant::DisjointPhysical)
          st.rule = PhysicalPowerLaw{cfg.alpha, cfg.h0};
        else
          st.rule = IdealUniform{c};
        st.duration = step_duration_pi_half(c, na, nb);
      }
      expand.push_back(st);
    }
  }

  s.steps = expand;
  for (auto it = expand.rbegin(); it != expand.rend(); ++it) {
    StepSpec st = *it;
    st.phase = Phase::Collapse;
    st.sign = -1;
    s.steps.push_back(st);
  }
  for (const auto& st : s.steps) s.total_runtime += st.duration;
  return s;
}

RuntimeSummary runtime_closed_form(const ProtocolConfig& cfg, const Geometry& geom) {
  const Schedule sched = build_schedule(cfg, geom);
  RuntimeSummary r;
  r.total = sched.total_runtime;
  for (const auto& st : sched.steps) r.per_step.push_back(st.duration);
  r.convention = cfg.convention;
  r.range = geom.blocks.range;
  if (cfg.variant == Variant::NestedIdeal) {
    r.closed_form = tau_sp(cfg.d, cfg.alpha, cfg.n, cfg.convention, cfg.h0);
  } else if (cfg.m > 1) {
    const std::size_t w = block_size(static_cast<std::size_t>(cfg.m), cfg.d);
    r.closed_form = tau_mp(cfg.alpha, cfg.beta, cfg.n, w, cfg.h0);
    r.paper_bound = tau_mp_bound(cfg.d, cfg.alpha, static_cast<std::size_t>(cfg.m), cfg.n, cfg.h0);
  } else {
    r.closed_form = tau_lr(cfg.alpha, cfg.beta, geom.blocks.range, cfg.h0);
  }
  return r;
}

RuntimeSummary runtime_closed_form(const ProtocolConfig& cfg) {
  return runtime_closed_form(cfg, build_geometry(cfg));
}

}  // namespace lrt
