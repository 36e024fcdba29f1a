#include "lrt/serialize.hpp"

#include <cmath>
#include <variant>

#include <json.hpp>

#include "lrt/errors.hpp"

namespace lrt {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json bound_json(const BoundValue& b) { return {{"value", number_or_null(b.value)}, {"vacuous", b.vacuous}}; }

json rule_json(const CouplingRule& rule) {
  if (const auto* u = std::get_if<IdealUniform>(&rule)) return {{"kind", "IdealUniform"}, {"coupling", u->coupling}};
  if (const auto* p = std::get_if<PhysicalPowerLaw>(&rule))
    return {{"kind", "PhysicalPowerLaw"}, {"alpha", p->alpha}, {"h0", p->h0}};
  const auto& m = std::get<MultiParticle>(rule);
  return {{"kind", "MultiParticle"},
          {"k_coupling", m.k_coupling},
          {"pair_coupling", m.pair_coupling},
          {"block", m.block},
          {"source_blocks", m.source_blocks}};
}

template <class T>
T get_as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string config_to_json(const ProtocolConfig& cfg) {
  json j = {{"d", cfg.d},
            {"alpha", cfg.alpha},
            {"h0", cfg.h0},
            {"n", cfg.n},
            {"variant", std::string(to_string(cfg.variant))},
            {"beta", cfg.beta},
            {"epsilon", cfg.epsilon},
            {"m", cfg.m},
            {"seed", cfg.seed},
            {"convention", std::string(to_string(cfg.convention))},
            {"policy", std::string(to_string(cfg.redraw))},
            {"site_limit", cfg.site_limit}};
  return j.dump(2) + "\n";
}

ProtocolConfig config_from_json(const std::string& text, const ProtocolConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  ProtocolConfig cfg = base;
  for (const auto& [key, v] : doc.items()) {
    const char* k = key.c_str();
    if (key == "d") cfg.d = get_as<int>(v, k);
    else if (key == "alpha") cfg.alpha = get_as<double>(v, k);
    else if (key == "h0") cfg.h0 = get_as<double>(v, k);
    else if (key == "n") cfg.n = get_as<int>(v, k);
    else if (key == "variant") cfg.variant = parse_variant(get_as<std::string>(v, k));
    else if (key == "beta") cfg.beta = get_as<double>(v, k);
    else if (key == "epsilon") cfg.epsilon = get_as<double>(v, k);
    else if (key == "m") cfg.m = get_as<int>(v, k);
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, k);
    else if (key == "convention") cfg.convention = parse_convention(get_as<std::string>(v, k));
    else if (key == "policy" || key == "redraw") cfg.redraw = parse_redraw(get_as<std::string>(v, k));
    else if (key == "site_limit") cfg.site_limit = get_as<std::size_t>(v, k);
    else throw InvalidArgument("unknown config key '" + key + "'");
  }
  return cfg;
}

std::string layout_to_json(const Geometry& geom) {
  const auto& b = geom.blocks;
  json j = {{"dim", geom.layout.dim},
            {"sites", geom.layout.size()},
            {"total_extent", geom.layout.total_extent},
            {"coords", geom.layout.coords},
            {"kind", b.kind == HierarchyKind::Nested ? "nested" : "disjoint"},
            {"n", b.n},
            {"first_level", b.first_level},
            {"levels", b.levels},
            {"shells", b.shells},
            {"collapse_levels", b.collapse_levels},
            {"collapse_shells", b.collapse_shells},
            {"source_site", b.source_site},
            {"target_site", b.target_site},
            {"range", b.range}};
  return j.dump() + "\n";
}

std::string schedule_to_json(const Schedule& sched, const RuntimeSummary& summary) {
  json steps = json::array();
  for (const auto& s : sched.steps) {
    steps.push_back({{"q", s.q},
                     {"phase", s.phase == Phase::Expand ? "Expand" : "Collapse"},
                     {"sign", s.sign},
                     {"duration", s.duration},
                     {"reference_coupling", s.reference_coupling},
                     {"rule", rule_json(s.rule)}});
  }
  json j = {{"steps", steps},
            {"total_runtime", sched.total_runtime},
            {"closed_form", summary.closed_form},
            {"convention", std::string(to_string(summary.convention))},
            {"range", summary.range}};
  if (summary.paper_bound > 0) j["paper_bound"] = summary.paper_bound;
  return j.dump(2) + "\n";
}

std::string bounds_to_json(const BoundReport& r) {
  json j = {{"gamma", r.gamma},
            {"epsilon", r.epsilon},
            {"range", r.range},
            {"per_step_delta", r.per_step},
            {"delta_rand_squared", bound_json(r.total_quadrature)},
            {"delta_rand_linear", bound_json(r.total_linear)},
            {"p_fail", bound_json(r.p_fail)}};
  if (r.has_long_range) {
    j["long_range"] = {{"h_q_max", r.h_q_max},
                       {"herr_norm_bound", r.herr_bound},
                       {"delta_lr_per_step", r.delta_lr_per_step},
                       {"delta_lr_squared_exact", bound_json(r.delta_lr_exact)},
                       {"delta_lr_squared_large_beta", bound_json(r.delta_lr_large_beta)}};
  }
  return j.dump(2) + "\n";
}

std::string trial_to_json(const TrialResult& r) {
  json delta = json::array();
  for (double v : r.per_step_delta) delta.push_back(number_or_null(v));
  json j = {{"p_final", r.p_final},
            {"runtime", r.runtime},
            {"per_step_uniformity", r.per_step_uniformity},
            {"per_step_delta", delta}};
  return j.dump(2) + "\n";
}

std::string multi_to_json(const MultiResult& r) {
  json j = {{"fidelities", r.fidelities},
            {"aggregate", r.aggregate},
            {"runtime", r.runtime},
            {"gram_drift", r.gram_drift},
            {"source_sites", r.source_sites},
            {"target_sites", r.target_sites}};
  return j.dump(2) + "\n";
}

}  // namespace lrt
