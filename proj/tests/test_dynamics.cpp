#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "lrt/dynamics.hpp"
#include "lrt/errors.hpp"
#include "lrt/noise.hpp"

using namespace lrt;

namespace {

constexpr double kPi = std::numbers::pi;

StepHamiltonian random_step(std::mt19937_64& rng, std::size_t a, std::size_t b, double scale) {
  std::normal_distribution<double> g(0, scale);
  StepHamiltonian h;
  for (std::size_t i = 0; i < a; ++i) h.from.push_back(i);
  for (std::size_t i = 0; i < b; ++i) h.to.push_back(a + i);
  h.couplings.resize(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
  for (Eigen::Index i = 0; i < h.couplings.size(); ++i) h.couplings(i) = g(rng);
  h.sign = rng() % 2 ? 1 : -1;
  return h;
}

// Independent propagator: Pade matrix exponential of -iH on the full space.
Eigen::MatrixXcd pade_propagator(const StepHamiltonian& h, std::size_t n, double t) {
  const Eigen::MatrixXcd a = std::complex<double>(0, -t) * h.dense(n);
  return a.exp();
}

ProtocolConfig nested(int d, int n) {
  ProtocolConfig c;
  c.d = d;
  c.n = n;
  return c;
}

ProtocolConfig gapped(Variant v, int n, double beta, int m = 1) {
  ProtocolConfig c;
  c.variant = v;
  c.n = n;
  c.beta = beta;
  c.m = m;
  return c;
}

}  // namespace

TEST(Assemble, NestedFirstStep) {
  const auto c = nested(1, 3);
  const auto g = build_geometry(c);
  const auto s = build_schedule(c, g);
  const auto h = assemble_hamiltonian(s.steps[0], g);
  ASSERT_EQ(h.couplings.size(), 1);
  EXPECT_EQ(h.couplings(0, 0), 0.5);
  EXPECT_EQ(h.from, (SiteList{0}));
  EXPECT_EQ(h.to, (SiteList{1}));
}

TEST(Assemble, PhysicalCouplingFromDistance) {
  SiteLayout layout;
  layout.coords = {{0}, {3}};
  const auto h = physical_couplings(layout, {0}, {1}, 2.0);
  EXPECT_DOUBLE_EQ(h(0, 0), 1.0 / 9);
}

TEST(Assemble, DeterministicWithoutNoise) {
  const auto c = gapped(Variant::DisjointPhysical, 4, 1.0);
  const auto g = build_geometry(c);
  const auto s = build_schedule(c, g);
  for (const auto& st : s.steps) {
    const auto a = assemble_hamiltonian(st, g);
    const auto b = assemble_hamiltonian(st, g);
    EXPECT_EQ(a.couplings, b.couplings);
    NoiseStream off{1, 2, 3, RedrawPolicy::PerStep, 0.0};
    EXPECT_EQ(assemble_hamiltonian(st, g, &off).couplings, a.couplings);
  }
}

TEST(Assemble, CouplingCapInPhysicalVariant) {
  const auto c = gapped(Variant::DisjointPhysical, 5, 1.5);
  const auto g = build_geometry(c);
  for (const auto& st : build_schedule(c, g).steps) {
    const auto h = assemble_hamiltonian(st, g);
    for (Eigen::Index r = 0; r < h.couplings.rows(); ++r)
      for (Eigen::Index k = 0; k < h.couplings.cols(); ++k)
        EXPECT_LE(h.couplings(r, k),
                  std::pow(static_cast<double>(pair_distance(g.layout, h.from[k], h.to[r])), -c.alpha) * (1 + 1e-15));
  }
}

TEST(Assemble, MultiQubitEntriesEqualPairCoupling) {
  const auto c = gapped(Variant::DisjointIdeal, 5, 1.0, 4);
  const auto g = build_geometry(c);
  for (const auto& st : build_schedule(c, g).steps) {
    const auto& mp = std::get<MultiParticle>(st.rule);
    const auto h = assemble_hamiltonian(st, g);
    EXPECT_NEAR(h.couplings.cwiseAbs().maxCoeff(), mp.pair_coupling, 1e-15);
    EXPECT_NEAR(h.couplings.cwiseAbs().minCoeff(), mp.pair_coupling, 1e-15);
    // Every populated mode rotates at rate K.
    EXPECT_NEAR(operator_norm(h.couplings), mp.k_coupling, 1e-12);
  }
}

TEST(Propagate, TwoLevelPiPulse) {
  StepHamiltonian h;
  h.from = {0};
  h.to = {1};
  h.couplings = Eigen::MatrixXd::Constant(1, 1, 0.37);
  auto psi = Amplitudes::basis(2, 0);
  propagate(psi, h, kPi / (2 * 0.37));
  EXPECT_NEAR(std::norm(psi.values(1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(psi.values(0)), 0.0, 1e-14);
}

TEST(Propagate, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(3);
  const auto h = random_step(rng, 3, 5, 1.0);
  Amplitudes psi;
  psi.values = Eigen::VectorXcd::Random(10);
  const auto before = psi.values;
  propagate(psi, h, 0.0);
  EXPECT_EQ(psi.values, before);
}

TEST(Propagate, MatchesPadeOracle) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 40; ++k) {
    const std::size_t a = 1 + rng() % 8, b = 1 + rng() % 12;
    const auto h = random_step(rng, a, b, 0.5 + (rng() % 100) / 20.0);
    const std::size_t n = a + b + 3;
    const double t = (rng() % 1000) / 100.0;
    Amplitudes psi;
    psi.values = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(n));
    psi.values.normalize();
    const Eigen::VectorXcd expect = pade_propagator(h, n, t) * psi.values;
    propagate(psi, h, t);
    EXPECT_LE((psi.values - expect).cwiseAbs().maxCoeff(), 1e-11) << "case " << k;
  }
}

TEST(Propagate, DenseEigenMatchesPade) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto h = random_step(rng, 1 + rng() % 6, 1 + rng() % 6, 1.0);
    const double t = (rng() % 500) / 100.0;
    const auto u = dense_propagator(h, t);
    const auto ref = pade_propagator(h, h.support_size(), t);
    EXPECT_LE((u.cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LE((u.transpose() * u - Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Propagate, ColumnsEvolveIndependently) {
  std::mt19937_64 rng(17);
  const auto h = random_step(rng, 4, 8, 1.0);
  ModeMatrix modes;
  modes.columns = Eigen::MatrixXcd::Random(14, 3);
  const auto start = modes.columns;
  propagate(modes, h, 1.3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    Amplitudes col;
    col.values = start.col(c);
    propagate(col, h, 1.3);
    EXPECT_LE((col.values - modes.columns.col(c)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Propagate, NormPreservedOverManySteps) {
  std::mt19937_64 rng(23);
  Amplitudes psi = Amplitudes::basis(40, 0);
  for (int k = 0; k < 200; ++k) {
    auto h = random_step(rng, 16, 24, 2.0);
    propagate(psi, h, 3.0);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
  }
}

TEST(RunSingle, NestedIsPerfect) {
  for (int n = 1; n <= 6; ++n) {
    const auto r = run_single(nested(1, n));
    EXPECT_NEAR(r.p_final, 1.0, 1e-9);
    EXPECT_NEAR(r.runtime, kPi * n, 1e-12 * n);
  }
  EXPECT_NEAR(run_single(nested(2, 3)).p_final, 1.0, 1e-9);
}

TEST(RunSingle, UniformSuperpositionAfterExpandSteps) {
  for (int d = 1; d <= 2; ++d) {
    const auto r = run_single(nested(d, 4));
    ASSERT_EQ(r.per_step_uniformity.size(), 4u);
    for (double dev : r.per_step_uniformity) EXPECT_LE(dev, 1e-8);
  }
}

TEST(RunSingle, PaperAngleBreaksUniformityInTwoDimensions) {
  auto c = nested(2, 3);
  c.convention = AngleConvention::Paper;
  const auto r = run_single(c);
  EXPECT_GT(r.per_step_uniformity.front(), 1e-3);
  EXPECT_LT(r.p_final, 1 - 1e-3);
  c.d = 1;
  EXPECT_NEAR(run_single(c).p_final, 1.0, 1e-9);
}

TEST(RunSingle, DisjointIdealIsPerfect) {
  for (double beta : {0.0, 0.5, 1.0, 3.0}) EXPECT_NEAR(run_single(gapped(Variant::DisjointIdeal, 5, beta)).p_final, 1.0, 1e-9);
}

TEST(RunSingle, PhysicalMatchesIndependentSimulation) {
  // Reference values from a separate dense-expm simulation of the same layout.
  EXPECT_NEAR(run_single(gapped(Variant::DisjointPhysical, 2, 1.0)).p_final, 0.804826834159489, 1e-12);
  EXPECT_NEAR(run_single(gapped(Variant::DisjointPhysical, 3, 1.0)).p_final, 0.697230133982173, 1e-12);
  EXPECT_NEAR(run_single(gapped(Variant::DisjointPhysical, 4, 1.0)).p_final, 0.601998922405379, 1e-12);
  auto c = gapped(Variant::DisjointPhysical, 3, 0.5);
  c.alpha = 2;
  const auto r = run_single(c);
  EXPECT_NEAR(r.p_final, 0.009164410288252, 1e-12);
  EXPECT_NEAR(r.runtime, 97.188064272214234, 1e-10);
}

TEST(RunSingle, TimeReversalFromMidpoint) {
  // The collapse half alone maps the mirrored W state back to the target.
  const auto c = nested(1, 4);
  const auto g = build_geometry(c);
  const auto s = build_schedule(c, g);
  Amplitudes psi;
  psi.values = Eigen::VectorXcd::Zero(16);
  for (SiteIndex i : g.blocks.collapse_levels[4]) psi.values(static_cast<Eigen::Index>(i)) = 0.25;
  for (std::size_t k = 4; k < 8; ++k) propagate(psi, assemble_hamiltonian(s.steps[k], g), s.steps[k].duration);
  EXPECT_NEAR(std::norm(psi.values(static_cast<Eigen::Index>(g.blocks.target_site))), 1.0, 1e-12);
}

TEST(RunSingle, NoisyRunsReproducible) {
  auto c = nested(1, 5);
  c.epsilon = 0.3;
  c.seed = 99;
  const auto a = run_single(c, 4);
  const auto b = run_single(c, 4);
  EXPECT_EQ(a.p_final, b.p_final);
  EXPECT_NE(a.p_final, run_single(c, 5).p_final);
  EXPECT_GE(a.p_final, 0.0);
  EXPECT_LE(a.p_final, 1.0);
}

TEST(RunSingle, StepErrorsObeyDuhamel) {
  auto c = nested(1, 5);
  c.epsilon = 0.2;
  TrialOptions opts;
  opts.record_step_errors = true;
  const auto r = run_single(c, 0, opts);
  ASSERT_EQ(r.per_step_delta.size(), 10u);
  for (double d : r.per_step_delta) {
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, 2.0);
  }
}

TEST(RunSingle, RejectsMultiQubitConfig) {
  auto c = gapped(Variant::DisjointIdeal, 4, 1.0, 2);
  EXPECT_THROW(run_single(c), InvalidArgument);
}

TEST(RunMulti, PerfectTransfer) {
  for (int m : {1, 2, 3, 4, 8})
    for (int n : {4, 5}) {
      const auto r = run_multi(gapped(Variant::DisjointIdeal, n, 1.0, m));
      ASSERT_EQ(r.fidelities.size(), static_cast<std::size_t>(m));
      for (double f : r.fidelities) EXPECT_NEAR(f, 1.0, 1e-9) << "m=" << m << " n=" << n;
      EXPECT_NEAR(r.aggregate, 1.0, 1e-9);
      EXPECT_LE(r.gram_drift, 1e-9);
    }
}

TEST(RunMulti, SingleQubitAgreesWithRunSingle) {
  const auto c = gapped(Variant::DisjointIdeal, 5, 1.0);
  const auto m = run_multi(c);
  const auto s = run_single(c);
  EXPECT_NEAR(m.fidelities[0], s.p_final, 1e-12);
  EXPECT_EQ(m.runtime, s.runtime);
}

TEST(RunMulti, RuntimeWithinSqrtTwoM) {
  const double single = run_single(gapped(Variant::DisjointIdeal, 6, 1.0)).runtime;
  for (int m : {2, 4, 8}) EXPECT_LE(run_multi(gapped(Variant::DisjointIdeal, 6, 1.0, m)).runtime, std::sqrt(2.0 * m) * single);
}

TEST(RunMulti, Rejections) {
  EXPECT_THROW(run_multi(nested(1, 3)), InvalidArgument);
  EXPECT_THROW(run_multi(gapped(Variant::DisjointIdeal, 2, 1.0, 4)), CapacityError);
}

TEST(StepError, Properties) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 30; ++k) {
    const auto h0 = random_step(rng, 1 + rng() % 6, 1 + rng() % 10, 1.0);
    EXPECT_EQ(step_error(h0, h0, 2.0), 0.0);
    auto h = h0;
    h.couplings += random_step(rng, h0.from.size(), h0.to.size(), 0.2).couplings;
    const double t = 0.1 + (rng() % 300) / 100.0;
    const double delta = step_error(h, h0, t);
    EXPECT_LE(delta, operator_norm(Eigen::MatrixXd(h.couplings - h0.couplings)) * t + 1e-12);
    EXPECT_LE(delta, 2.0 + 1e-12);
  }
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5))), 1.0, 1e-15);
  EXPECT_NEAR(operator_norm(Eigen::MatrixXd(Eigen::MatrixXd::Constant(3, 12, 0.7))), 0.7 * 6, 1e-13);
  Eigen::MatrixXd d(2, 2);
  d << 3, 0, 0, -5;
  EXPECT_NEAR(operator_norm(d), 5.0, 1e-15);
}
