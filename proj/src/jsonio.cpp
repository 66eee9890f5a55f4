#include "cforge/jsonio.hpp"

#include "cforge/version.hpp"

namespace cforge {

Json value_to_json(const Value& v) {
  if (v.sort == Sort::Bool) return v.b;
  if (v.z.fits_slong_p()) return static_cast<long long>(v.z.get_si());
  return v.z.get_str();  // out of int64 range: decimal string
}

Json trace_to_json(const Trace& t) {
  Json arr = Json::array();
  for (const auto& f : t.frames) {
    Json fr;
    fr["step"] = f.step;
    Json in = Json::object();
    for (const auto& [n, v] : f.inputs) in[n] = value_to_json(v);
    fr["inputs"] = in;
    Json st = Json::object();
    for (const auto& [n, v] : f.state) st[n] = value_to_json(v);
    fr["state"] = st;
    arr.push_back(std::move(fr));
  }
  return arr;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["version"] = CFORGE_VERSION;
  j["verdict"] = to_string(v.tag);
  j["k"] = v.k;
  if (!v.reason.empty()) j["reason"] = v.reason;
  j["trace"] = trace_to_json(v.trace);
  return j;
}

Json report_to_json(const RunReport& r, bool include_trace) {
  Json j;
  j["version"] = CFORGE_VERSION;
  j["steps"] = r.steps;
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    Json e;
    e["step"] = v.step;
    e["label"] = v.label;
    e["kind"] = v.kind;
    vs.push_back(std::move(e));
  }
  j["violations"] = vs;
  j["default_branch_firings"] = r.default_branch_firings;
  if (r.assumption_breach_step)
    j["assumption_breach_step"] = *r.assumption_breach_step;
  else
    j["assumption_breach_step"] = nullptr;
  if (include_trace) j["trace"] = trace_to_json(r.trace);
  return j;
}

}  // namespace cforge
