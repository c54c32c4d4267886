#pragma once

#include <iosfwd>
#include <string_view>

#include <json.hpp>

#include "floodcover/coverage.hpp"

namespace floodcover {

inline constexpr std::string_view kCodeVersion = "floodcover 0.1.0";

nlohmann::json config_to_json(const SimConfig &config);
/// Missing keys keep their defaults; the result is validated.
SimConfig config_from_json(const nlohmann::json &j);

/// First line: {"type":"header","version":...,"config":{...}}; then one
/// object per step with t, positions, rho, n_f, H, coverage_rate,
/// max_centroid_gap and the active density components.
void write_run_jsonl(const RunRecord &record, std::ostream &out);
RunRecord read_run_jsonl(std::istream &in);

} // namespace floodcover
