#include "lrt/ortho.hpp"

#include <cmath>
#include <string>

#include "lrt/errors.hpp"

namespace lrt {

namespace {

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

int log2_exact(std::size_t x) {
  int w = 0;
  while ((std::size_t{1} << w) < x) ++w;
  return w;
}

}  // namespace

OrthoFamily recursive_family(int depth) {
  if (depth < 0) throw InvalidArgument("recursive_family needs depth >= 0");
  if (depth > 13) throw CapacityError("recursive_family depth " + std::to_string(depth) + " too large");
  OrthoFamily fam;
  fam.depth = 0;
  fam.vectors = {{1}};
  for (int w = 0; w < depth; ++w) {
    const std::size_t half = fam.vectors.size();
    std::vector<std::vector<int>> next(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
      const auto& u = fam.vectors[i];
      next[i] = u;
      next[i].insert(next[i].end(), u.begin(), u.end());
      next[i + half] = u;
      for (int x : u) next[i + half].push_back(-x);
    }
    fam.vectors = std::move(next);
    fam.depth = w + 1;
  }
  return fam;
}

std::size_t block_size(std::size_t m, int d) {
  if (m < 1) throw InvalidArgument("block_size needs m >= 1");
  if (d < 1) throw InvalidArgument("block_size needs d >= 1");
  const std::size_t base = std::size_t{1} << d;
  std::size_t w = 1;
  while (w < m) w *= base;
  return w;
}

TransferBasis m1_matrix(std::size_t W) {
  if (!is_power_of_two(W)) throw InvalidArgument("m1_matrix needs a power-of-two block size");
  const int depth = log2_exact(W);
  const auto fam = recursive_family(depth);
  const double scale = 1.0 / std::sqrt(static_cast<double>(W));
  TransferBasis out;
  out.level = 1;
  out.matrix.resize(static_cast<Eigen::Index>(W), static_cast<Eigen::Index>(W));
  for (std::size_t c = 0; c < W; ++c)
    for (std::size_t r = 0; r < W; ++r)
      out.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = scale * fam.vectors[c][r];
  return out;
}

TransferBasis extend(const TransferBasis& basis, int d) {
  if (d < 1) throw InvalidArgument("extend needs d >= 1");
  const Eigen::Index copies = Eigen::Index{1} << d;
  const Eigen::MatrixXd mt = basis.matrix.transpose();
  TransferBasis out;
  out.level = basis.level + 1;
  out.matrix.resize(mt.rows(), mt.cols() * copies);
  const double scale = std::pow(2.0, -0.5 * d);
  for (Eigen::Index k = 0; k < copies; ++k) out.matrix.middleCols(k * mt.cols(), mt.cols()) = scale * mt;
  return out;
}

Eigen::MatrixXd level_coupling_pattern(std::size_t source_blocks, std::size_t W, int d) {
  if (source_blocks < 1) throw InvalidArgument("level_coupling_pattern needs at least one source block");
  if (d < 1) throw InvalidArgument("level_coupling_pattern needs d >= 1");
  const Eigen::MatrixXd m1 = m1_matrix(W).matrix;
  const Eigen::Index w = m1.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(source_blocks);
  const Eigen::Index rows = (Eigen::Index{1} << d) * k;
  Eigen::MatrixXd out(rows * w, k * w);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < k; ++c) out.block(r * w, c * w, w, w) = m1;
  return out;
}

}  // namespace lrt
