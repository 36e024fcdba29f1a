#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "lrt/config.hpp"
#include "lrt/geometry.hpp"

namespace lrt {

enum class Phase { Expand, Collapse };

// Every pair between the two blocks gets the same coupling.
struct IdealUniform {
  double coupling = 0;
};

// h_jk = h0 * dist(j, k)^-alpha from the layout.
struct PhysicalPowerLaw {
  double alpha = 1;
  double h0 = 1;
};

// Multi-qubit step: pair_coupling * sqrt(W) * (J kron M_1) so the largest
// entry is pair_coupling; every populated mode rotates at rate k_coupling.
struct MultiParticle {
  double k_coupling = 0;
  double pair_coupling = 0;
  std::size_t block = 1;          // W
  std::size_t source_blocks = 1;  // sub-blocks of size W in the source block
};

using CouplingRule = std::variant<IdealUniform, PhysicalPowerLaw, MultiParticle>;

struct StepSpec {
  int q = 1;
  Phase phase = Phase::Expand;
  CouplingRule rule;
  int sign = 1;
  double duration = 0;
  // Reference coupling C_q the duration was computed from.
  double reference_coupling = 0;
};

struct Schedule {
  std::vector<StepSpec> steps;
  double total_runtime = 0;
};

struct RuntimeSummary {
  double total = 0;
  std::vector<double> per_step;
  double closed_form = 0;
  AngleConvention convention = AngleConvention::Corrected;
  // Looser analytic bound where one exists (multi-qubit runtime), else 0.
  double paper_bound = 0;
  double range = 0;
};

// C_q = 2^{-q alpha} h0.
double ideal_coupling(int q, double alpha, double h0 = 1.0);

// [ceil(2^{q-2}) + beta 2^q + 2^{q-1}]^{-alpha}.
double lr_center_coupling(int q, double alpha, double beta);

// arctan(2^d - 1) (Paper) or arctan(sqrt(2^d - 1)) (Corrected).
double angle_phi(int d, AngleConvention convention);

// Nested ideal step: phi / (C_q sqrt(|B_{q-1}| |B~_q|)).
double step_duration_ideal(int q, const ProtocolConfig& cfg, AngleConvention convention);

// Full pi/2 rotation between two uniform blocks: pi / (2 C sqrt(a b)).
double step_duration_pi_half(double coupling, double size_a, double size_b);

// K = C / sqrt(W), with W a power of 2^d.
double mp_coupling(double coupling, std::size_t block, int d = 1);

// Closed forms. All durations scale as 1/h0.
double tau_sp(int d, double alpha, int n, AngleConvention convention, double h0 = 1.0);
double tau_lr(double alpha, double beta, double range, double h0 = 1.0);
// Exact runtime of the block-rotation multi-qubit construction.
double tau_mp(double alpha, double beta, int n, std::size_t block, double h0 = 1.0);
// Looser disjoint-ball bound with the (3/2)^alpha constant.
double tau_mp_bound(int d, double alpha, std::size_t m, int n, double h0 = 1.0);

double emission_fidelity(double tau, double gamma);

Schedule build_schedule(const ProtocolConfig& cfg, const Geometry& geom);

RuntimeSummary runtime_closed_form(const ProtocolConfig& cfg, const Geometry& geom);
RuntimeSummary runtime_closed_form(const ProtocolConfig& cfg);

}  // namespace lrt
