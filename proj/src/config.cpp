#include "lrt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "lrt/errors.hpp"

namespace lrt {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (d < 1) throw InvalidArgument("d must be >= 1");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (!std::isfinite(alpha) || alpha < 0) throw InvalidArgument("alpha must be finite and >= 0");
  if (!std::isfinite(h0) || h0 <= 0) throw InvalidArgument("h0 must be finite and > 0");
  if (!std::isfinite(beta) || beta < 0) throw InvalidArgument("beta must be finite and >= 0");
  if (!std::isfinite(epsilon) || epsilon < 0) throw InvalidArgument("epsilon must be finite and >= 0");
  if (variant != Variant::NestedIdeal && d != 1)
    throw InvalidArgument("disjoint variants are only defined for d = 1");
  if (m > 1 && variant != Variant::DisjointIdeal)
    throw InvalidArgument("multi-qubit transfer (m > 1) requires the DisjointIdeal variant");
}

void ProtocolConfig::validate_for_bounds() const {
  validate();
  if (variant == Variant::DisjointPhysical && !(beta > 0))
    throw InvalidArgument("error bounds for the physical variant require beta > 0");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::NestedIdeal: return "NestedIdeal";
    case Variant::DisjointIdeal: return "DisjointIdeal";
    case Variant::DisjointPhysical: return "DisjointPhysical";
  }
  return "?";
}

std::string_view to_string(AngleConvention c) {
  return c == AngleConvention::Paper ? "Paper" : "Corrected";
}

std::string_view to_string(RedrawPolicy p) {
  return p == RedrawPolicy::PerStep ? "PerStep" : "Static";
}

Variant parse_variant(std::string_view s) {
  const auto v = lower(s);
  if (v == "nested" || v == "nestedideal") return Variant::NestedIdeal;
  if (v == "disjoint" || v == "disjointideal") return Variant::DisjointIdeal;
  if (v == "physical" || v == "disjointphysical" || v == "lr") return Variant::DisjointPhysical;
  throw InvalidArgument("unknown variant '" + std::string(s) + "'");
}

AngleConvention parse_convention(std::string_view s) {
  const auto v = lower(s);
  if (v == "paper") return AngleConvention::Paper;
  if (v == "corrected") return AngleConvention::Corrected;
  throw InvalidArgument("unknown convention '" + std::string(s) + "'");
}

RedrawPolicy parse_redraw(std::string_view s) {
  const auto v = lower(s);
  if (v == "perstep" || v == "per-step" || v == "step") return RedrawPolicy::PerStep;
  if (v == "static") return RedrawPolicy::Static;
  throw InvalidArgument("unknown redraw policy '" + std::string(s) + "'");
}

}  // namespace lrt
