#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lrt/config.hpp"
#include "lrt/geometry.hpp"
#include "lrt/schedule.hpp"

namespace lrt {

struct NoiseStream;

// One protocol step in the single-excitation sector:
//   H = i * sign * sum_{j in from, k in to} h_jk (|k><j| - |j><k|)
// couplings(r, c) holds h_jk for k = to[r], j = from[c]. Only the two
// blocks are stored; the full matrix is built on request.
struct StepHamiltonian {
  SiteList from;
  SiteList to;
  Eigen::MatrixXd couplings;
  int sign = 1;

  std::size_t support_size() const { return from.size() + to.size(); }
  // Real antisymmetric -iH restricted to the support, ordered [from, to].
  Eigen::MatrixXd generator() const;
  // Full N x N Hermitian matrix.
  Eigen::MatrixXcd dense(std::size_t n_sites) const;
};

struct Amplitudes {
  Eigen::VectorXcd values;

  static Amplitudes basis(std::size_t n_sites, SiteIndex site);
  double norm() const { return values.norm(); }
};

// N x m single-particle mode matrix; column a is the current wave function
// of the excitation that started on source_sites[a].
struct ModeMatrix {
  Eigen::MatrixXcd columns;
  SiteList source_sites;
  SiteList target_sites;
};

struct TrialResult {
  double p_final = 0;
  // After each expanding step: max deviation of |psi_i| from the uniform
  // value on the level's block, and of |psi_i| from 0 elsewhere.
  std::vector<double> per_step_uniformity;
  // ||exp(-iHt) - exp(-iH0 t)|| per step, when requested and noise is on.
  std::vector<double> per_step_delta;
  double runtime = 0;
};

struct MultiResult {
  std::vector<double> fidelities;
  double aggregate = 0;  // |det(targets^H U sources)|^2
  double runtime = 0;
  double gram_drift = 0;
  SiteList source_sites;
  SiteList target_sites;
};

struct TrialOptions {
  bool record_uniformity = true;
  bool record_step_errors = false;
  // Dense step errors are skipped (NaN) above this support size.
  std::size_t step_error_limit = 2048;
};

StepHamiltonian assemble_hamiltonian(const StepSpec& step, const Geometry& geom,
                                     const NoiseStream* noise = nullptr);

// state <- exp(-iHt) state. Truncated Taylor series with scaling on the
// step's support; throws NumericalError if the series does not converge.
void propagate(Amplitudes& state, const StepHamiltonian& h, double t);
void propagate(ModeMatrix& state, const StepHamiltonian& h, double t);

// exp(-iHt) on the support as a real orthogonal matrix, via Hermitian
// eigendecomposition of iG.
Eigen::MatrixXd dense_propagator(const StepHamiltonian& h, double t);

double step_error(const StepHamiltonian& h, const StepHamiltonian& h0, double t);

// Largest singular value.
double operator_norm(const Eigen::MatrixXd& m);
double operator_norm(const Eigen::MatrixXcd& m);

TrialResult run_single(const ProtocolConfig& cfg, const Geometry& geom, const Schedule& sched,
                       std::uint64_t trial = 0, const TrialOptions& opts = {});
TrialResult run_single(const ProtocolConfig& cfg, std::uint64_t trial = 0, const TrialOptions& opts = {});

MultiResult run_multi(const ProtocolConfig& cfg, const Geometry& geom, const Schedule& sched,
                      std::uint64_t trial = 0);
MultiResult run_multi(const ProtocolConfig& cfg, std::uint64_t trial = 0);

}  // namespace lrt
