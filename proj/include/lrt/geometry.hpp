#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrt/config.hpp"

namespace lrt {

using SiteIndex = std::size_t;
using SiteList = std::vector<SiteIndex>;

// Integer lattice positions, one per site index. Site indices are dense in
// [0, size()).
struct SiteLayout {
  int dim = 1;
  std::vector<std::vector<std::int64_t>> coords;
  std::int64_t total_extent = 0;  // largest Manhattan distance between two sites

  std::size_t size() const { return coords.size(); }
};

enum class HierarchyKind { Nested, Disjoint };

// Per-level site membership for both protocol phases.
//
// levels[q] is the block the expanding phase fills at level q and
// shells[q] the sites that are new at that level (for disjoint layouts the
// whole block). collapse_levels / collapse_shells are the mirror images used
// by the collapsing phase, stored position-by-position so that
// collapse_levels[q][i] is the mirror of levels[q][i]. Levels below
// first_level are empty (multi-qubit layouts start at the block that holds
// all qubits).
struct BlockHierarchy {
  HierarchyKind kind = HierarchyKind::Nested;
  int n = 0;
  int first_level = 0;
  std::vector<SiteList> levels;
  std::vector<SiteList> shells;
  std::vector<SiteList> collapse_levels;
  std::vector<SiteList> collapse_shells;
  SiteIndex source_site = 0;
  SiteIndex target_site = 0;
  // Transfer range R as it enters the closed forms: the cube side 2^n for
  // nested layouts, the realized source-target distance for disjoint ones.
  double range = 0;
};

struct Geometry {
  SiteLayout layout;
  BlockHierarchy blocks;
};

// Half-open nested cubes B_q = {0, ..., 2^q - 1}^d. Sites are numbered shell
// by shell, so B_q occupies indices [0, 2^{qd}). The target is the corner
// (2^n - 1, 0, ..., 0).
Geometry nested_hierarchy(int d, int n, std::size_t site_limit = kDefaultSiteLimit);

// Spatially gapped 1D layout. Expanding blocks of sizes 2^first_level, ...,
// 2^n are followed by the mirrored collapsing blocks 2^{n-1}, ...,
// 2^first_level; between levels q-1 and q sit ceil(beta * 2^q) empty cells.
Geometry disjoint_layout(int d, int n, double beta, int first_level = 0,
                         std::size_t site_limit = kDefaultSiteLimit);

// Geometry matching a configuration (multi-qubit runs start at level log2 W).
Geometry build_geometry(const ProtocolConfig& cfg);

std::int64_t pair_distance(const SiteLayout& layout, SiteIndex i, SiteIndex j);

// Distance between the coordinate centroids of two site sets (1D layouts).
double center_distance(const SiteLayout& layout, const SiteList& a, const SiteList& b);

// Empty cells inserted before level q of a disjoint layout.
std::int64_t gap_cells(int q, double beta);

}  // namespace lrt
