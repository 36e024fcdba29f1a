#pragma once

#include <string>

#include "lrt/config.hpp"
#include "lrt/dynamics.hpp"
#include "lrt/geometry.hpp"
#include "lrt/noise.hpp"
#include "lrt/schedule.hpp"

namespace lrt {

// JSON views of the core types. Doubles round-trip exactly.
std::string config_to_json(const ProtocolConfig& cfg);
// Keys missing from the document keep their value from `base`. Unknown keys
// and wrongly typed values throw InvalidArgument.
ProtocolConfig config_from_json(const std::string& text, const ProtocolConfig& base = {});

// Site coordinates and per-level membership of both phases.
std::string layout_to_json(const Geometry& geom);
std::string schedule_to_json(const Schedule& sched, const RuntimeSummary& summary);
std::string bounds_to_json(const BoundReport& report);
std::string trial_to_json(const TrialResult& r);
std::string multi_to_json(const MultiResult& r);

}  // namespace lrt
