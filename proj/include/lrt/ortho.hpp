#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace lrt {

// 2^depth mutually orthogonal +-1 vectors of dimension 2^depth, built by
//   u_i^{w+1}       = u_i^w (+) u_i^w
//   u_{i+2^w}^{w+1} = u_i^w (+) (-u_i^w)
// starting from the single vector (1). Vectors are unnormalized, |u| = 2^{w/2}.
struct OrthoFamily {
  int depth = 0;
  std::vector<std::vector<int>> vectors;
};

// Block transfer matrix. Rows are orthonormal.
struct TransferBasis {
  int level = 1;
  Eigen::MatrixXd matrix;
};

OrthoFamily recursive_family(int depth);

// Smallest power of 2^d that is >= m.
std::size_t block_size(std::size_t m, int d);

// Columns are the depth-log2(W) family normalized by 2^{-w/2}. Orthogonal.
TransferBasis m1_matrix(std::size_t W);

// 2^{-d/2} [M^T M^T ... M^T] (2^d copies). The result has orthonormal rows
// when the input has orthonormal columns (as M_1 does).
TransferBasis extend(const TransferBasis& basis, int d);

// Coupling pattern of one multi-qubit step from a block made of
// `source_blocks` sub-blocks of W sites into a block of 2^d times as many:
// J (all-ones, 2^d k x k) kron M_1. Every entry is +-1/sqrt(W). For k = 1
// this equals extend(m1_matrix(W), d)^T scaled by 2^{d/2}.
Eigen::MatrixXd level_coupling_pattern(std::size_t source_blocks, std::size_t W, int d);

}  // namespace lrt
