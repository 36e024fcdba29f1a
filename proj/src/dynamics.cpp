#include "lrt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>

#include "lrt/errors.hpp"
#include "lrt/noise.hpp"
#include "lrt/ortho.hpp"

namespace lrt {

namespace {

constexpr int kMaxTaylorTerms = 60;
constexpr double kTaylorTol = 1e-17;
constexpr double kNormDriftTol = 1e-8;

using Eigen::Index;
using Eigen::MatrixXd;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Z <- exp(sign * S * t) Z with S = [[0, -G^T], [G, 0]] and Z stacked
// [from rows; to rows].
void taylor_propagate(const StepHamiltonian& h, double t, MatrixXd& z) {
  if (t < 0) throw InvalidArgument("propagation time must be >= 0");
  if (t == 0 || z.size() == 0) return;
  const MatrixXd& g = h.couplings;
  const Index na = static_cast<Index>(h.from.size());
  const Index nb = static_cast<Index>(h.to.size());
  if (g.rows() != nb || g.cols() != na) throw InvalidArgument("coupling block shape mismatch");
  if (!g.allFinite()) throw NumericalError("non-finite coupling in step Hamiltonian");

  const MatrixXd ga = g.cwiseAbs();
  const double norm_bound =
      std::max(ga.rowwise().sum().maxCoeff(), ga.colwise().sum().maxCoeff()) * t;
  const int substeps = std::max(1, static_cast<int>(std::ceil(norm_bound)));
  const double tau = h.sign * t / substeps;

  MatrixXd term(z.rows(), z.cols());
  MatrixXd next(z.rows(), z.cols());
  for (int s = 0; s < substeps; ++s) {
    term = z;
    bool converged = false;
    for (int k = 1; k <= kMaxTaylorTerms; ++k) {
      const double c = tau / k;
      next.topRows(na).noalias() = -c * (g.transpose() * term.bottomRows(nb));
      next.bottomRows(nb).noalias() = c * (g * term.topRows(na));
      term.swap(next);
      z += term;
      if (term.lpNorm<Eigen::Infinity>() <= kTaylorTol * z.lpNorm<Eigen::Infinity>()) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("Taylor propagator did not converge");
  }
}

SiteList support_of(const StepHamiltonian& h) {
  SiteList s = h.from;
  s.insert(s.end(), h.to.begin(), h.to.end());
  return s;
}

// Real/imaginary parts of the support rows, side by side.
template <class Mat>
void propagate_columns(Mat& values, const StepHamiltonian& h, double t) {
  const SiteList sup = support_of(h);
  const Index rows = static_cast<Index>(sup.size());
  const Index cols = values.cols();
  bool has_imag = false;
  for (Index r = 0; r < rows && !has_imag; ++r)
    for (Index c = 0; c < cols; ++c)
      if (values(static_cast<Index>(sup[r]), c).imag() != 0) {
        has_imag = true;
        break;
      }
  MatrixXd z(rows, has_imag ? 2 * cols : cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const auto v = values(static_cast<Index>(sup[r]), c);
      z(r, c) = v.real();
      if (has_imag) z(r, cols + c) = v.imag();
    }
  taylor_propagate(h, t, z);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      values(static_cast<Index>(sup[r]), c) = {z(r, c), has_imag ? z(r, cols + c) : 0.0};
}

std::pair<SiteList, SiteList> step_sites(const StepSpec& step, const BlockHierarchy& b) {
  if (step.q < 1 || step.q > b.n || step.q <= b.first_level)
    throw InvalidArgument("step level " + std::to_string(step.q) + " is outside the hierarchy");
  if (step.phase == Phase::Expand) return {b.levels[step.q - 1], b.shells[step.q]};
  return {b.collapse_levels[step.q - 1], b.collapse_shells[step.q]};
}

double uniformity_deviation(const Eigen::VectorXcd& psi, const SiteList& block) {
  std::vector<char> inside(static_cast<std::size_t>(psi.size()), 0);
  const double expected = 1.0 / std::sqrt(static_cast<double>(block.size()));
  double dev = 0;
  for (SiteIndex s : block) {
    inside[s] = 1;
    dev = std::max(dev, std::abs(std::abs(psi(static_cast<Index>(s))) - expected));
  }
  for (Index i = 0; i < psi.size(); ++i)
    if (!inside[static_cast<std::size_t>(i)]) dev = std::max(dev, std::abs(psi(i)));
  return dev;
}

}  // namespace

MatrixXd StepHamiltonian::generator() const {
  const Index na = static_cast<Index>(from.size());
  const Index nb = static_cast<Index>(to.size());
  MatrixXd s = MatrixXd::Zero(na + nb, na + nb);
  s.bottomLeftCorner(nb, na) = sign * couplings;
  s.topRightCorner(na, nb) = -sign * couplings.transpose();
  return s;
}

Eigen::MatrixXcd StepHamiltonian::dense(std::size_t n_sites) const {
  const Index n = static_cast<Index>(n_sites);
  Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(n, n);
  const std::complex<double> i_sign(0.0, static_cast<double>(sign));
  for (Index r = 0; r < couplings.rows(); ++r)
    for (Index c = 0; c < couplings.cols(); ++c) {
      const Index k = static_cast<Index>(to.at(static_cast<std::size_t>(r)));
      const Index j = static_cast<Index>(from.at(static_cast<std::size_t>(c)));
      if (k >= n || j >= n) throw InvalidArgument("site index beyond matrix size");
      hm(k, j) += i_sign * couplings(r, c);
      hm(j, k) -= i_sign * couplings(r, c);
    }
  return hm;
}

Amplitudes Amplitudes::basis(std::size_t n_sites, SiteIndex site) {
  if (site >= n_sites) throw InvalidArgument("basis site out of range");
  Amplitudes a;
  a.values = Eigen::VectorXcd::Zero(static_cast<Index>(n_sites));
  a.values(static_cast<Index>(site)) = 1.0;
  return a;
}

StepHamiltonian assemble_hamiltonian(const StepSpec& step, const Geometry& geom, const NoiseStream* noise) {
  auto [from, to] = step_sites(step, geom.blocks);
  StepHamiltonian h;
  h.sign = step.sign;
  const Index rows = static_cast<Index>(to.size());
  const Index cols = static_cast<Index>(from.size());
  std::visit(overloaded{
                 [&](const IdealUniform& r) { h.couplings = MatrixXd::Constant(rows, cols, r.coupling); },
                 [&](const PhysicalPowerLaw& r) {
                   h.couplings = physical_couplings(geom.layout, from, to, r.alpha, r.h0);
                 },
                 [&](const MultiParticle& r) {
                   h.couplings = r.pair_coupling * std::sqrt(static_cast<double>(r.block)) *
                                 level_coupling_pattern(r.source_blocks, r.block, geom.layout.dim);
                   if (h.couplings.rows() != rows || h.couplings.cols() != cols)
                     throw InvalidArgument("multi-qubit pattern does not match the block sizes");
                 },
             },
             step.rule);
  h.from = std::move(from);
  h.to = std::move(to);
  if (noise != nullptr && noise->epsilon > 0) return gaussian_perturb(h, noise->epsilon, *noise);
  return h;
}

void propagate(Amplitudes& state, const StepHamiltonian& h, double t) {
  propagate_columns(state.values, h, t);
}

void propagate(ModeMatrix& state, const StepHamiltonian& h, double t) {
  propagate_columns(state.columns, h, t);
}

MatrixXd dense_propagator(const StepHamiltonian& h, double t) {
  if (t < 0) throw InvalidArgument("propagation time must be >= 0");
  const MatrixXd s = h.generator();
  if (s.size() == 0) return s;
  // iS is Hermitian; S = -i V diag(l) V^H and exp(S t) = V diag(e^{-i l t}) V^H.
  const Eigen::MatrixXcd herm = std::complex<double>(0, 1) * s.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXcd phases =
      (std::complex<double>(0, -t) * eig.eigenvalues().cast<std::complex<double>>()).array().exp();
  const Eigen::MatrixXcd u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  return u.real();
}

double step_error(const StepHamiltonian& h, const StepHamiltonian& h0, double t) {
  if (h.from != h0.from || h.to != h0.to || h.sign != h0.sign)
    throw InvalidArgument("step_error needs Hamiltonians on the same blocks");
  return operator_norm(MatrixXd(dense_propagator(h, t) - dense_propagator(h0, t)));
}

double operator_norm(const MatrixXd& m) {
  if (m.size() == 0) return 0;
  if (!m.allFinite()) throw NumericalError("operator_norm of a non-finite matrix");
  Eigen::BDCSVD<MatrixXd> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("singular value decomposition failed");
  return svd.singularValues()(0);
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  if (!m.allFinite()) throw NumericalError("operator_norm of a non-finite matrix");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("singular value decomposition failed");
  return svd.singularValues()(0);
}

TrialResult run_single(const ProtocolConfig& cfg, const Geometry& geom, const Schedule& sched,
                       std::uint64_t trial, const TrialOptions& opts) {
  if (cfg.m != 1) throw InvalidArgument("run_single transfers one qubit; use run_multi for m > 1");
  const std::size_t n_sites = geom.layout.size();
  Amplitudes psi = Amplitudes::basis(n_sites, geom.blocks.source_site);

  TrialResult out;
  out.runtime = sched.total_runtime;
  for (std::size_t s = 0; s < sched.steps.size(); ++s) {
    const StepSpec& step = sched.steps[s];
    const StepHamiltonian h0 = assemble_hamiltonian(step, geom);
    if (cfg.epsilon > 0) {
      const NoiseStream stream{cfg.seed, trial, s, cfg.redraw, cfg.epsilon};
      const StepHamiltonian h = gaussian_perturb(h0, cfg.epsilon, stream);
      propagate(psi, h, step.duration);
      if (opts.record_step_errors)
        out.per_step_delta.push_back(h.support_size() <= opts.step_error_limit
                                         ? step_error(h, h0, step.duration)
                                         : std::numeric_limits<double>::quiet_NaN());
    } else {
      propagate(psi, h0, step.duration);
      if (opts.record_step_errors) out.per_step_delta.push_back(0.0);
    }
    if (std::abs(psi.norm() - 1.0) > kNormDriftTol)
      throw NumericalError("norm drifted to " + std::to_string(psi.norm()) + " after step " + std::to_string(s));
    if (opts.record_uniformity && step.phase == Phase::Expand)
      out.per_step_uniformity.push_back(uniformity_deviation(psi.values, geom.blocks.levels[step.q]));
  }
  out.p_final = std::norm(psi.values(static_cast<Index>(geom.blocks.target_site)));
  return out;
}

TrialResult run_single(const ProtocolConfig& cfg, std::uint64_t trial, const TrialOptions& opts) {
  const Geometry geom = build_geometry(cfg);
  return run_single(cfg, geom, build_schedule(cfg, geom), trial, opts);
}

MultiResult run_multi(const ProtocolConfig& cfg, const Geometry& geom, const Schedule& sched,
                      std::uint64_t trial) {
  if (cfg.variant != Variant::DisjointIdeal || cfg.d != 1)
    throw InvalidArgument("run_multi needs the DisjointIdeal variant in d = 1");
  const auto& b = geom.blocks;
  const std::size_t m = static_cast<std::size_t>(cfg.m);
  const std::size_t w = block_size(m, cfg.d);
  if (b.levels[b.first_level].size() != w) throw InvalidArgument("layout first block does not match W");
  if (m > w) throw CapacityError("more qubits than sites in the first block");

  // After n - first_level expanding steps the qubits sit in the M_1 basis
  // (odd count, mirror symmetric) or the identity basis (even count, where
  // the mirror reverses their order within the block).
  const bool odd = (b.n - b.first_level) % 2 == 1;
  ModeMatrix modes;
  modes.columns = Eigen::MatrixXcd::Zero(static_cast<Index>(geom.layout.size()), static_cast<Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    modes.source_sites.push_back(b.levels[b.first_level][a]);
    modes.target_sites.push_back(b.collapse_levels[b.first_level][odd ? a : w - 1 - a]);
    modes.columns(static_cast<Index>(modes.source_sites[a]), static_cast<Index>(a)) = 1.0;
  }

  for (std::size_t s = 0; s < sched.steps.size(); ++s) {
    const StepSpec& step = sched.steps[s];
    const StepHamiltonian h0 = assemble_hamiltonian(step, geom);
    if (cfg.epsilon > 0)
      propagate(modes, gaussian_perturb(h0, cfg.epsilon, NoiseStream{cfg.seed, trial, s, cfg.redraw, cfg.epsilon}), step.duration);
    else
      propagate(modes, h0, step.duration);
  }

  MultiResult out;
  out.runtime = sched.total_runtime;
  out.source_sites = modes.source_sites;
  out.target_sites = modes.target_sites;
  Eigen::MatrixXcd overlap(static_cast<Index>(m), static_cast<Index>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = 0; c < m; ++c)
      overlap(static_cast<Index>(a), static_cast<Index>(c)) =
          modes.columns(static_cast<Index>(modes.target_sites[a]), static_cast<Index>(c));
  for (std::size_t a = 0; a < m; ++a)
    out.fidelities.push_back(std::norm(overlap(static_cast<Index>(a), static_cast<Index>(a))));
  out.aggregate = std::norm(overlap.determinant());
  const Eigen::MatrixXcd gram = modes.columns.adjoint() * modes.columns;
  out.gram_drift = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  return out;
}

MultiResult run_multi(const ProtocolConfig& cfg, std::uint64_t trial) {
  const Geometry geom = build_geometry(cfg);
  return run_multi(cfg, geom, build_schedule(cfg, geom), trial);
}

}  // namespace lrt
