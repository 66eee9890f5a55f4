#pragma once

#include <json.hpp>

#include "cforge/realizability.hpp"
#include "cforge/simulate.hpp"

namespace cforge {

using Json = nlohmann::ordered_json;

Json value_to_json(const Value& v);
Json trace_to_json(const Trace& t);

// {"version", "verdict", "k", ["reason"], "trace"} with stable key order.
Json verdict_to_json(const Verdict& v);

// {"version", "steps", "violations", "default_branch_firings",
//  "assumption_breach_step", "trace"}
Json report_to_json(const RunReport& r, bool include_trace = true);

}  // namespace cforge
