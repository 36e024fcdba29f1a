#include "lrt/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lrt/errors.hpp"
#include "lrt/ortho.hpp"

namespace lrt {

namespace {

void check_capacity(int bits, std::size_t site_limit) {
  if (bits >= 62 || (std::uint64_t{1} << bits) > site_limit)
    throw CapacityError("hierarchy needs 2^" + std::to_string(bits) +
                        " sites, above the site limit of " + std::to_string(site_limit));
}

}  // namespace

std::int64_t gap_cells(int q, double beta) {
  return static_cast<std::int64_t>(std::ceil(beta * std::ldexp(1.0, q)));
}

Geometry nested_hierarchy(int d, int n, std::size_t site_limit) {
  if (d < 1 || n < 1) throw InvalidArgument("nested_hierarchy needs d >= 1 and n >= 1");
  check_capacity(n * d, site_limit);

  const std::int64_t side = std::int64_t{1} << n;
  const std::size_t total = std::size_t{1} << (n * d);

  Geometry g;
  g.layout.dim = d;
  g.layout.coords.reserve(total);
  g.layout.total_extent = static_cast<std::int64_t>(d) * (side - 1);

  // Linear lookup from coordinates to site index, used for the mirror map.
  std::vector<SiteIndex> index_of(total);
  auto linear = [&](const std::vector<std::int64_t>& x) {
    std::size_t lin = 0;
    for (int a = d - 1; a >= 0; --a) lin = lin * static_cast<std::size_t>(side) + static_cast<std::size_t>(x[a]);
    return lin;
  };

  auto& b = g.blocks;
  b.kind = HierarchyKind::Nested;
  b.n = n;
  b.first_level = 0;
  b.levels.resize(n + 1);
  b.shells.resize(n + 1);

  std::vector<std::int64_t> x(d, 0);
  for (int q = 0; q <= n; ++q) {
    const std::int64_t len = std::int64_t{1} << q;
    const std::int64_t inner = q == 0 ? 0 : (std::int64_t{1} << (q - 1));
    std::fill(x.begin(), x.end(), 0);
    // Odometer over {0..len-1}^d, keeping points outside B_{q-1}.
    while (true) {
      bool in_previous = q > 0;
      for (int a = 0; a < d && in_previous; ++a) in_previous = x[a] < inner;
      if (!in_previous) {
        const SiteIndex idx = g.layout.coords.size();
        g.layout.coords.push_back(x);
        index_of[linear(x)] = idx;
        b.shells[q].push_back(idx);
      }
      int a = 0;
      while (a < d && ++x[a] == len) x[a++] = 0;
      if (a == d) break;
    }
    if (q > 0) b.levels[q] = b.levels[q - 1];
    b.levels[q].insert(b.levels[q].end(), b.shells[q].begin(), b.shells[q].end());
  }

  auto mirror = [&](SiteIndex s) {
    auto y = g.layout.coords[s];
    y[0] = side - 1 - y[0];
    return index_of[linear(y)];
  };
  b.collapse_levels.resize(n + 1);
  b.collapse_shells.resize(n + 1);
  for (int q = 0; q <= n; ++q) {
    for (SiteIndex s : b.levels[q]) b.collapse_levels[q].push_back(mirror(s));
    for (SiteIndex s : b.shells[q]) b.collapse_shells[q].push_back(mirror(s));
  }
  b.source_site = 0;
  b.target_site = mirror(0);
  b.range = static_cast<double>(side);
  return g;
}

Geometry disjoint_layout(int d, int n, double beta, int first_level, std::size_t site_limit) {
  if (d != 1) throw InvalidArgument("disjoint layouts are only defined for d = 1");
  if (n < 1) throw InvalidArgument("disjoint_layout needs n >= 1");
  if (!(beta >= 0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and >= 0");
  if (first_level < 0 || first_level >= n)
    throw CapacityError("first block (2^" + std::to_string(first_level) +
                        " sites) leaves no protocol step below level n = " + std::to_string(n));
  check_capacity(n + 2, site_limit);

  // Positions along the line: expanding blocks, then the mirrored ones.
  std::vector<std::int64_t> starts;
  std::vector<std::int64_t> sizes;
  std::int64_t pos = 0;
  for (int q = first_level; q <= n; ++q) {
    if (q > first_level) pos += gap_cells(q, beta);
    starts.push_back(pos);
    sizes.push_back(std::int64_t{1} << q);
    pos += sizes.back();
  }
  for (int q = n - 1; q >= first_level; --q) {
    pos += gap_cells(q + 1, beta);
    starts.push_back(pos);
    sizes.push_back(std::int64_t{1} << q);
    pos += sizes.back();
  }
  const std::int64_t extent = pos - 1;

  Geometry g;
  g.layout.dim = 1;
  g.layout.total_extent = extent;
  for (std::size_t k = 0; k < starts.size(); ++k)
    for (std::int64_t i = 0; i < sizes[k]; ++i) g.layout.coords.push_back({starts[k] + i});

  const std::size_t total = g.layout.size();
  auto& b = g.blocks;
  b.kind = HierarchyKind::Disjoint;
  b.n = n;
  b.first_level = first_level;
  b.levels.resize(n + 1);
  b.collapse_levels.resize(n + 1);
  SiteIndex next = 0;
  for (int q = first_level; q <= n; ++q)
    for (std::int64_t i = 0; i < (std::int64_t{1} << q); ++i) b.levels[q].push_back(next++);
  // The layout is mirror symmetric and sites are sorted by position, so the
  // mirror of site s is total - 1 - s.
  for (int q = first_level; q <= n; ++q)
    for (SiteIndex s : b.levels[q]) b.collapse_levels[q].push_back(total - 1 - s);
  b.shells = b.levels;
  b.collapse_shells = b.collapse_levels;
  b.source_site = b.levels[first_level].front();
  b.target_site = b.collapse_levels[first_level].front();
  b.range = static_cast<double>(extent);
  return g;
}

Geometry build_geometry(const ProtocolConfig& cfg) {
  cfg.validate();
  if (cfg.variant == Variant::NestedIdeal) return nested_hierarchy(cfg.d, cfg.n, cfg.site_limit);
  int first = 0;
  if (cfg.m > 1) {
    const std::size_t w = block_size(static_cast<std::size_t>(cfg.m), cfg.d);
    while ((std::size_t{1} << first) < w) ++first;
  }
  return disjoint_layout(cfg.d, cfg.n, cfg.beta, first, cfg.site_limit);
}

std::int64_t pair_distance(const SiteLayout& layout, SiteIndex i, SiteIndex j) {
  if (i >= layout.size() || j >= layout.size())
    throw InvalidArgument("site index out of range");
  std::int64_t dist = 0;
  const auto& a = layout.coords[i];
  const auto& c = layout.coords[j];
  for (std::size_t k = 0; k < a.size(); ++k) dist += a[k] > c[k] ? a[k] - c[k] : c[k] - a[k];
  return dist;
}

double center_distance(const SiteLayout& layout, const SiteList& a, const SiteList& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("center_distance of an empty block");
  auto centroid = [&](const SiteList& s) {
    double sum = 0;
    for (SiteIndex i : s) sum += static_cast<double>(layout.coords.at(i)[0]);
    return sum / static_cast<double>(s.size());
  };
  return std::abs(centroid(b) - centroid(a));
}

}  // namespace lrt
