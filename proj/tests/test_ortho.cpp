#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lrt/errors.hpp"
#include "lrt/ortho.hpp"

using namespace lrt;

namespace {

// Sylvester construction H_{2^w} = H_2 kron ... kron H_2.
Eigen::MatrixXi sylvester(int w) {
  Eigen::MatrixXi h(1, 1);
  h(0, 0) = 1;
  for (int k = 0; k < w; ++k) {
    Eigen::MatrixXi next(2 * h.rows(), 2 * h.cols());
    next << h, h, h, -h;
    h = next;
  }
  return h;
}

}  // namespace

TEST(RecursiveFamily, DepthZeroAndOne) {
  EXPECT_EQ(recursive_family(0).vectors, (std::vector<std::vector<int>>{{1}}));
  EXPECT_EQ(recursive_family(1).vectors, (std::vector<std::vector<int>>{{1, 1}, {1, -1}}));
}

TEST(RecursiveFamily, DepthTwo) {
  const std::vector<std::vector<int>> expect{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  EXPECT_EQ(recursive_family(2).vectors, expect);
}

TEST(RecursiveFamily, GramIsScaledIdentity) {
  for (int w = 0; w <= 6; ++w) {
    const auto fam = recursive_family(w);
    const std::size_t dim = std::size_t{1} << w;
    ASSERT_EQ(fam.vectors.size(), dim);
    for (std::size_t i = 0; i < dim; ++i) {
      ASSERT_EQ(fam.vectors[i].size(), dim);
      for (int x : fam.vectors[i]) EXPECT_TRUE(x == 1 || x == -1);
      for (std::size_t j = 0; j < dim; ++j) {
        long dot = 0;
        for (std::size_t k = 0; k < dim; ++k) dot += fam.vectors[i][k] * fam.vectors[j][k];
        EXPECT_EQ(dot, i == j ? static_cast<long>(dim) : 0);
      }
    }
  }
}

TEST(RecursiveFamily, SameColumnsAsSylvester) {
  for (int w = 0; w <= 4; ++w) {
    const auto h = sylvester(w);
    std::vector<std::vector<int>> cols;
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      std::vector<int> v(h.rows());
      for (Eigen::Index r = 0; r < h.rows(); ++r) v[r] = h(r, c);
      cols.push_back(v);
    }
    auto ours = recursive_family(w).vectors;
    std::sort(cols.begin(), cols.end());
    std::sort(ours.begin(), ours.end());
    EXPECT_EQ(ours, cols) << "w=" << w;
  }
}

TEST(RecursiveFamily, Limits) {
  EXPECT_THROW(recursive_family(-1), InvalidArgument);
  EXPECT_THROW(recursive_family(14), CapacityError);
}

TEST(BlockSize, Examples) {
  EXPECT_EQ(block_size(1, 1), 1u);
  EXPECT_EQ(block_size(3, 1), 4u);
  EXPECT_EQ(block_size(5, 2), 16u);
  for (int d = 1; d <= 3; ++d)
    for (std::size_t m = 1; m <= 100; ++m) {
      const std::size_t w = block_size(m, d);
      EXPECT_GE(w, m);
      EXPECT_LT(w, (std::size_t{1} << d) * m);
    }
  EXPECT_THROW(block_size(0, 1), InvalidArgument);
}

TEST(M1Matrix, SmallCases) {
  EXPECT_EQ(m1_matrix(1).matrix, Eigen::MatrixXd::Ones(1, 1));
  Eigen::MatrixXd two(2, 2);
  two << 1, 1, 1, -1;
  two /= std::sqrt(2.0);
  EXPECT_TRUE(m1_matrix(2).matrix.isApprox(two, 1e-15));
  EXPECT_THROW(m1_matrix(3), InvalidArgument);
}

TEST(M1Matrix, Orthogonal) {
  for (Eigen::Index w = 1; w <= 64; w *= 2) {
    const auto m = m1_matrix(static_cast<std::size_t>(w)).matrix;
    EXPECT_LE((m.transpose() * m - Eigen::MatrixXd::Identity(w, w)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((m * m.transpose() - Eigen::MatrixXd::Identity(w, w)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Extend, SingleSite) {
  const auto e = extend(m1_matrix(1), 1);
  ASSERT_EQ(e.matrix.rows(), 1);
  ASSERT_EQ(e.matrix.cols(), 2);
  EXPECT_NEAR(e.matrix(0, 0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(e.matrix(0, 1), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Extend, RowsOrthonormal) {
  for (int d = 1; d <= 2; ++d)
    for (std::size_t w = 1; w <= 16; w *= 2) {
      const auto e = extend(m1_matrix(w), d).matrix;
      EXPECT_EQ(e.cols(), e.rows() << d);
      EXPECT_LE((e * e.transpose() - Eigen::MatrixXd::Identity(e.rows(), e.rows())).cwiseAbs().maxCoeff(), 1e-12);
      for (Eigen::Index r = 0; r < e.rows(); ++r) EXPECT_NEAR(e.row(r).norm(), 1.0, 1e-12);
    }
}

TEST(CouplingPattern, EntriesAndSingleBlockCase) {
  for (std::size_t w : {1u, 2u, 4u, 8u}) {
    const auto p = level_coupling_pattern(1, w, 1);
    const Eigen::MatrixXd e = extend(m1_matrix(w), 1).matrix.transpose() * std::sqrt(2.0);
    EXPECT_TRUE(p.isApprox(e, 1e-14));
    for (std::size_t k : {1u, 2u, 4u}) {
      const auto pk = level_coupling_pattern(k, w, 1);
      EXPECT_EQ(pk.rows(), static_cast<Eigen::Index>(2 * k * w));
      EXPECT_EQ(pk.cols(), static_cast<Eigen::Index>(k * w));
      EXPECT_NEAR(pk.cwiseAbs().maxCoeff(), 1 / std::sqrt(static_cast<double>(w)), 1e-15);
      EXPECT_NEAR(pk.cwiseAbs().minCoeff(), 1 / std::sqrt(static_cast<double>(w)), 1e-15);
      // P^T P = (J^T J) kron (M^T M) = 2k J_k kron I_W.
      const Eigen::MatrixXd gram = pk.transpose() * pk;
      const auto iw = static_cast<Eigen::Index>(w);
      for (Eigen::Index r = 0; r < gram.rows(); ++r)
        for (Eigen::Index c = 0; c < gram.cols(); ++c)
          EXPECT_NEAR(gram(r, c), r % iw == c % iw ? 2.0 * static_cast<double>(k) : 0.0, 1e-12);
    }
  }
}
