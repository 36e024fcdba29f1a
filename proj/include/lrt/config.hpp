#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace lrt {

enum class Variant { NestedIdeal, DisjointIdeal, DisjointPhysical };

// Angle used for the nested uniform-superposition step.
//   Paper:     arctan(|B~_q| / |B_{q-1}|)
//   Corrected: arctan(sqrt(|B~_q| / |B_{q-1}|))
// The two coincide for d = 1.
enum class AngleConvention { Paper, Corrected };

// Whether coupling noise is redrawn for every protocol step or fixed per
// site pair for the whole protocol.
enum class RedrawPolicy { PerStep, Static };

inline constexpr std::size_t kDefaultSiteLimit = std::size_t{1} << 22;

struct ProtocolConfig {
  int d = 1;
  double alpha = 1.0;
  double h0 = 1.0;
  int n = 1;
  Variant variant = Variant::NestedIdeal;
  double beta = 0.0;
  double epsilon = 0.0;
  int m = 1;
  std::uint64_t seed = 0;
  AngleConvention convention = AngleConvention::Corrected;
  RedrawPolicy redraw = RedrawPolicy::PerStep;
  std::size_t site_limit = kDefaultSiteLimit;

  // Throws InvalidArgument on the first violated invariant.
  void validate() const;
  // Stricter check used before evaluating error bounds (beta > 0 for the
  // physical variant).
  void validate_for_bounds() const;
};

std::string_view to_string(Variant v);
std::string_view to_string(AngleConvention c);
std::string_view to_string(RedrawPolicy p);

// Accepts the long names ("NestedIdeal") and the short CLI names
// ("nested", "disjoint", "physical"). Throws InvalidArgument otherwise.
Variant parse_variant(std::string_view s);
AngleConvention parse_convention(std::string_view s);
RedrawPolicy parse_redraw(std::string_view s);

}  // namespace lrt
